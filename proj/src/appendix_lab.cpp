#include "gifslab/appendix_lab.hpp"

#include <cmath>
#include <stdexcept>

namespace gifslab {

namespace {

/// Evenly spaced net of {0} x [lo, hi] with spacing <= 2*resolution, both
/// endpoints exact.
void append_segment(std::vector<Point>& pts, double lo, double hi, double resolution) {
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / (2.0 * resolution)));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = i == steps ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(steps);
        pts.push_back(Point({0.0, t}));
    }
}

}  // namespace

ExampleSpace::ExampleSpace(std::size_t n_max, double resolution)
    : n_max_(n_max),
      resolution_(resolution),
      perfect_part_([&] {
          if (n_max < 1) throw std::invalid_argument("ExampleSpace: n_max must be >= 1");
          if (!(resolution > 0.0))
              throw std::invalid_argument("ExampleSpace: resolution must be > 0");
          std::vector<Point> pts;
          append_segment(pts, 0.0, 1.0, resolution);
          append_segment(pts, 2.0, 3.0, resolution);
          return CompactNet(std::move(pts), resolution);
      }()),
      isolated_part_([&] {
          std::vector<Point> pts;
          for (std::size_t n = 1; n <= n_max; ++n) {
              const double x = 1.0 / static_cast<double>(n);
              for (std::size_t i = 0; i <= n; ++i)
                  pts.push_back(Point({x, static_cast<double>(i) / static_cast<double>(n)}));
              for (std::size_t i = 2 * n; i <= 3 * n; ++i)
                  pts.push_back(Point({x, static_cast<double>(i) / static_cast<double>(n)}));
          }
          return CompactNet(std::move(pts), 0.0);
      }()) {}

CompactNet ExampleSpace::lower_segment() const {
    std::vector<Point> pts;
    for (const Point& p : perfect_part_.points())
        if (p[1] <= 1.0) pts.push_back(p);
    return CompactNet(std::move(pts), resolution_);
}

bool ExampleSpace::contains(const Point& p) const {
    return perfect_part_.contains(p) || isolated_part_.contains(p);
}

ExampleSpace build_example_space(std::size_t n_max, double resolution) {
    return ExampleSpace(n_max, resolution);
}

std::optional<CompactNet> retract(const CompactNet& k, const ExampleSpace& space) {
    if (k.dim() != 2) throw std::invalid_argument("retract: the example space is planar");
    std::vector<Point> kept;
    for (const Point& p : k.points()) {
        if (!space.contains(p)) throw std::invalid_argument("retract: K is not a subset of X");
        if (p[0] == 0.0) kept.push_back(p);  // the perfect part sits on the axis x = 0
    }
    if (kept.empty()) return std::nullopt;
    return CompactNet(std::move(kept), k.resolution());
}

double hausdorff_with_empty(const std::optional<CompactNet>& a,
                            const std::optional<CompactNet>& b) {
    if (!a && !b) return 0.0;
    if (!a || !b) return 1.0;  // the appendix convention: H(empty, A) = 1
    return hausdorff_distance(*a, *b);
}

CompactNet witness_sequence_element(std::size_t n, const ExampleSpace& space) {
    if (n < 1 || n > space.n_max())
        throw std::out_of_range("witness_sequence_element: n out of range");
    std::vector<Point> pts = {Point({0.0, 0.0})};
    const double x = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i)
        pts.push_back(Point({x, static_cast<double>(i) / static_cast<double>(n)}));
    return CompactNet(std::move(pts), 0.0);
}

DiscontinuityWitness discontinuity_witness(std::size_t n, const ExampleSpace& space) {
    const CompactNet k_n = witness_sequence_element(n, space);
    const CompactNet k = space.lower_segment();
    DiscontinuityWitness w;
    w.h1 = hausdorff_distance(k_n, k);
    w.h2 = hausdorff_with_empty(retract(k_n, space), retract(k, space));
    return w;
}

}  // namespace gifslab
