#include "gifslab/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gifslab {

GaugeFunction GaugeFunction::power_law(double exponent) {
    if (!(exponent > 0.0))
        throw std::invalid_argument("GaugeFunction: power-law exponent must be > 0");
    GaugeFunction g;
    g.eval_ = [exponent](double t) { return t <= 0.0 ? 0.0 : std::pow(t, exponent); };
    g.descriptor_ = "t^" + std::to_string(exponent);
    return g;
}

GaugeFunction GaugeFunction::tabulated(std::vector<std::pair<double, double>> steps) {
    if (steps.empty()) throw std::invalid_argument("GaugeFunction: empty table");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i].first > 0.0) || !(steps[i].second > 0.0))
            throw std::invalid_argument("GaugeFunction: table entries must be positive");
        if (i > 0 && (steps[i].first <= steps[i - 1].first || steps[i].second < steps[i - 1].second))
            throw std::invalid_argument("GaugeFunction: table must increase");
    }
    GaugeFunction g;
    g.eval_ = [steps](double t) {
        if (t < steps.front().first) return 0.0;
        auto it = std::upper_bound(steps.begin(), steps.end(), t,
                                   [](double v, const auto& s) { return v < s.first; });
        return std::prev(it)->second;
    };
    g.descriptor_ = "tabulated[" + std::to_string(steps.size()) + "]";
    return g;
}

double GaugeFunction::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("GaugeFunction: negative argument");
    return t == 0.0 ? 0.0 : eval_(t);
}

GaugeFunction parse_gauge(const std::string& text) {
    if (text.rfind("t^", 0) != 0)
        throw std::invalid_argument("parse_gauge: expected a descriptor like t^0.6309");
    const double s = std::stod(text.substr(2));
    return GaugeFunction::power_law(s);
}

double premeasure_cell_cover(const std::vector<Interval>& cells, const GaugeFunction& h,
                             double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("premeasure: delta must be > 0");
    double sum = 0.0;
    for (const Interval& c : cells) {
        if (c.diam() > delta)
            throw std::invalid_argument("premeasure: cover piece wider than delta");
        sum += h(c.diam());
    }
    return sum;
}

double premeasure_upper(const CellTree& tree, std::size_t depth, const GaugeFunction& h,
                        double delta) {
    if (depth < 1 || depth > tree.depth())
        throw std::out_of_range("premeasure: depth out of range");
    if (tree.diam_bound(depth) > delta)
        throw std::invalid_argument("premeasure: cell cover needs b_n <= delta");
    std::vector<Interval> cells;
    for (const auto& [addr, iv] : tree.cells_at_depth(depth)) cells.push_back(iv);
    return premeasure_cell_cover(cells, h, delta);
}

double premeasure_upper(const CompactNet& net, const GaugeFunction& h, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("premeasure: delta must be > 0");
    if (net.dim() != 1) throw std::invalid_argument("premeasure: greedy cover is 1-D only");
    double sum = 0.0;
    const auto& pts = net.points();
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= pts.size(); ++i) {
        if (i < pts.size() && pts[i][0] - pts[i - 1][0] <= delta) continue;
        const double span = pts[i - 1][0] - pts[run_start][0];
        if (span == 0.0) {
            sum += h(0.0);  // singleton run, degenerate cover piece
        } else {
            const auto pieces = static_cast<std::size_t>(std::ceil(span / delta));
            sum += static_cast<double>(pieces) * h(span / static_cast<double>(pieces));
        }
        run_start = i;
    }
    return sum;
}

double overlap_upper(const CellTree& tree, const SampledMap& f, const GaugeFunction& h,
                     double delta) {
    if (f.window() != 1) throw std::invalid_argument("overlap_upper: point-to-point map required");
    const CompactNet net = materialize_net(tree, tree.depth());
    std::vector<Point> image;
    image.reserve(f.anchors().size());
    for (const auto& a : f.anchors()) image.push_back(a.output);
    const CompactNet img(std::move(image));

    std::vector<Point> overlap;
    const double thr = net.resolution();
    for (const Point& p : net.points()) {
        for (const Point& q : img.points()) {
            if (distance(p, q) <= thr) {
                overlap.push_back(p);
                break;
            }
        }
    }
    if (overlap.empty()) return 0.0;  // diam of the empty set is 0
    return premeasure_upper(CompactNet(std::move(overlap)), h, delta);
}

std::vector<Interval> ternary_cantor_cells(std::size_t m) {
    std::vector<Interval> cells = {{0.0, 1.0}};
    for (std::size_t level = 0; level < m; ++level) {
        std::vector<Interval> next;
        next.reserve(cells.size() * 2);
        for (const Interval& c : cells) {
            const double third = c.diam() / 3.0;
            next.push_back({c.lo, c.lo + third});
            next.push_back({c.hi - third, c.hi});
        }
        cells = std::move(next);
    }
    return cells;
}

CompactNet ternary_cantor_net(std::size_t m) {
    std::vector<Point> pts;
    for (const Interval& c : ternary_cantor_cells(m)) {
        pts.push_back(Point::scalar(c.lo));
        pts.push_back(Point::scalar(c.hi));
    }
    return CompactNet(std::move(pts), std::pow(3.0, -static_cast<double>(m)));
}

}  // namespace gifslab
