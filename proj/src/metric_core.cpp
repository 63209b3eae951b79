#include "gifslab/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gifslab/parallel.hpp"

namespace gifslab {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Point: dimension must be >= 1");
    for (double c : coords_) {
        if (!std::isfinite(c)) throw std::invalid_argument("Point: coordinates must be finite");
    }
}

double distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.coords().begin(), a.coords().end(),
                                        b.coords().begin(), b.coords().end());
}

CompactNet::CompactNet(std::vector<Point> points, double resolution)
    : points_(std::move(points)), resolution_(resolution) {
    if (points_.empty()) throw std::invalid_argument("CompactNet: must be nonempty");
    if (!(resolution_ >= 0.0)) throw std::invalid_argument("CompactNet: resolution must be >= 0");
    const std::size_t d = points_.front().dim();
    for (const Point& p : points_) {
        if (p.dim() != d) throw std::invalid_argument("CompactNet: mixed dimensions");
    }
    std::sort(points_.begin(), points_.end(), lex_less);
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

bool CompactNet::contains(const Point& x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x, lex_less);
    return it != points_.end() && *it == x;
}

namespace {

void require_same_dim(const CompactNet& a, const CompactNet& b, const char* op) {
    if (a.dim() != b.dim()) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

// sup over b in B of inf over a in A of d(a,b), both sorted 1-D coordinate arrays.
double directed_sup_inf_1d(const std::vector<double>& a, const std::vector<double>& b) {
    double sup = 0.0;
    std::size_t i = 0;
    for (double y : b) {
        while (i + 1 < a.size() && a[i + 1] <= y) ++i;
        double best = std::abs(y - a[i]);
        if (i + 1 < a.size()) best = std::min(best, std::abs(a[i + 1] - y));
        sup = std::max(sup, best);
    }
    return sup;
}

double directed_sup_inf(const CompactNet& from, const CompactNet& to) {
    // sup over points of `from` of the distance to `to`
    const auto& src = from.points();
    const auto& dst = to.points();
    return parallel_max(src.size(), 0.0, [&](std::size_t i) {
        double inf = std::numeric_limits<double>::infinity();
        for (const Point& q : dst) inf = std::min(inf, distance(src[i], q));
        return inf;
    });
}

std::vector<double> flatten_1d(const CompactNet& a) {
    std::vector<double> out;
    out.reserve(a.size());
    for (const Point& p : a.points()) out.push_back(p[0]);
    return out;  // CompactNet storage is sorted, so this is ascending
}

}  // namespace

double hausdorff_distance(const CompactNet& a, const CompactNet& b) {
    require_same_dim(a, b, "hausdorff_distance");
    if (a.dim() == 1) {
        const auto xs = flatten_1d(a), ys = flatten_1d(b);
        return std::max(directed_sup_inf_1d(xs, ys), directed_sup_inf_1d(ys, xs));
    }
    return std::max(directed_sup_inf(a, b), directed_sup_inf(b, a));
}

double set_distance(const CompactNet& a, const CompactNet& b) {
    require_same_dim(a, b, "set_distance");
    if (a.dim() == 1) {
        const auto xs = flatten_1d(a), ys = flatten_1d(b);
        double inf = std::numeric_limits<double>::infinity();
        std::size_t i = 0, j = 0;
        while (i < xs.size() && j < ys.size()) {
            inf = std::min(inf, std::abs(xs[i] - ys[j]));
            if (xs[i] < ys[j]) ++i; else ++j;
        }
        return inf;
    }
    double inf = std::numeric_limits<double>::infinity();
    for (const Point& p : a.points())
        for (const Point& q : b.points()) inf = std::min(inf, distance(p, q));
    return inf;
}

double diameter(const CompactNet& a) {
    if (a.dim() == 1) return a.points().back()[0] - a.points().front()[0];
    const auto& pts = a.points();
    return parallel_max(pts.size(), 0.0, [&](std::size_t i) {
        double m = 0.0;
        for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::max(m, distance(pts[i], pts[j]));
        return m;
    });
}

bool neighborhood_contains(const CompactNet& a, double r, const Point& x) {
    if (!(r > 0.0)) throw std::invalid_argument("neighborhood_contains: r must be > 0");
    for (const Point& p : a.points())
        if (distance(p, x) < r) return true;
    return false;
}

CompactNet merge(const CompactNet& a, const CompactNet& b) {
    require_same_dim(a, b, "merge");
    std::vector<Point> pts = a.points();
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    return CompactNet(std::move(pts), std::max(a.resolution(), b.resolution()));
}

CompactNet embed_first_axis(const CompactNet& one_dimensional, std::size_t dim) {
    if (one_dimensional.dim() != 1)
        throw std::invalid_argument("embed_first_axis: source must be 1-D");
    if (dim < 1) throw std::invalid_argument("embed_first_axis: dim must be >= 1");
    std::vector<Point> pts;
    pts.reserve(one_dimensional.size());
    for (const Point& p : one_dimensional.points()) {
        std::vector<double> c(dim, 0.0);
        c[0] = p[0];
        pts.emplace_back(std::move(c));
    }
    return CompactNet(std::move(pts), one_dimensional.resolution());
}

BoundedSeq::BoundedSeq(std::vector<Point> entries, TailRule rule, std::optional<Point> designated)
    : entries_(std::move(entries)), rule_(rule), designated_(std::move(designated)) {
    if (entries_.empty()) throw std::invalid_argument("BoundedSeq: depth must be >= 1");
    const std::size_t d = entries_.front().dim();
    for (const Point& p : entries_)
        if (p.dim() != d) throw std::invalid_argument("BoundedSeq: mixed dimensions");
    if (rule_ == TailRule::DesignatedPoint) {
        if (!designated_) throw std::invalid_argument("BoundedSeq: designated tail point missing");
        if (designated_->dim() != d) throw std::invalid_argument("BoundedSeq: tail dimension mismatch");
    }
}

const Point& BoundedSeq::tail_point() const {
    return rule_ == TailRule::RepeatLast ? entries_.back() : *designated_;
}

SeqMetricResult seq_metric(double q, const BoundedSeq& x, const BoundedSeq& y) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("seq_metric: q must be in (0,1]");
    if (x.depth() != y.depth()) throw std::invalid_argument("seq_metric: depth mismatch");
    if (x.dim() != y.dim()) throw std::invalid_argument("seq_metric: dimension mismatch");
    const std::size_t T = x.depth();
    double sup = 0.0;
    double w = 1.0;
    for (std::size_t n = 0; n < T; ++n) {
        sup = std::max(sup, w * distance(x.entry(n), y.entry(n)));
        w *= q;
    }
    // Tail entries are constant, so their contribution is exactly
    // q^T * d(tail_x, tail_y) (the weight of the first tail index).
    sup = std::max(sup, w * distance(x.tail_point(), y.tail_point()));
    return {sup, 0.0};
}

}  // namespace gifslab
