#include "gifslab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gifslab {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void rect(std::ostringstream& os, double x, double y, double w, double h, const char* fill) {
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(std::max(w, 0.3))
       << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"/>\n";
}

}  // namespace

std::string svg_tree(const CellTree& tree, std::size_t max_depth) {
    const double width = 800.0, row = 40.0, bar = 22.0, margin = 20.0;
    const std::size_t depths = std::min(max_depth, tree.depth());
    const double height = margin * 2 + row * (depths + 1);
    const double lo = tree.ambient().lo;
    const double scale = (width - 2 * margin) / tree.ambient().diam();
    static const char* palette[] = {"#1b6ca8", "#43a047", "#e65100", "#6a1b9a"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(height) << "\">\n";
    rect(os, margin, margin, width - 2 * margin, 4, "#bbbbbb");  // ambient interval
    for (std::size_t n = 1; n <= depths; ++n) {
        const double y = margin + row * n;
        for (const auto& [addr, iv] : tree.cells_at_depth(n))
            rect(os, margin + (iv.lo - lo) * scale, y, iv.diam() * scale, bar,
                 palette[(n - 1) % 4]);
    }
    // leaf net ticks
    const double y = margin + row * depths + bar + 6;
    for (const auto& [addr, iv] : tree.cells_at_depth(tree.depth()))
        rect(os, margin + (tree.representative(addr)[0] - lo) * scale, y, 0.8, 8, "#000000");
    os << "</svg>\n";
    return os.str();
}

std::string svg_trace(const std::vector<double>& trace) {
    const double width = 640.0, height = 360.0, margin = 40.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(height) << "\">\n";
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double d : trace) {
        if (d > 0.0) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    if (trace.size() >= 2 && hi > 0.0) {
        if (lo == hi) lo = hi / 10.0;
        const double lx = (width - 2 * margin) / static_cast<double>(trace.size() - 1);
        os << "<polyline fill=\"none\" stroke=\"#1b6ca8\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < trace.size(); ++k) {
            const double v = std::max(trace[k], lo / 10.0);
            const double ty = margin + (std::log(hi) - std::log(v)) / (std::log(hi) - std::log(lo / 10.0)) *
                                           (height - 2 * margin);
            os << num(margin + lx * static_cast<double>(k)) << "," << num(ty) << " ";
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_scatter(const std::vector<ScatterGroup>& groups) {
    const double width = 640.0, height = 640.0, margin = 40.0;
    double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
    bool first = true;
    for (const auto& g : groups)
        for (const Point& p : g.points) {
            if (first) {
                xlo = xhi = p[0];
                ylo = yhi = p[1];
                first = false;
            }
            xlo = std::min(xlo, p[0]);
            xhi = std::max(xhi, p[0]);
            ylo = std::min(ylo, p[1]);
            yhi = std::max(yhi, p[1]);
        }
    const double sx = (width - 2 * margin) / std::max(xhi - xlo, 1e-9);
    const double sy = (height - 2 * margin) / std::max(yhi - ylo, 1e-9);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(height) << "\">\n";
    for (const auto& g : groups) {
        for (const Point& p : g.points) {
            os << "<circle cx=\"" << num(margin + (p[0] - xlo) * sx) << "\" cy=\""
               << num(height - margin - (p[1] - ylo) * sy) << "\" r=\"" << num(g.radius)
               << "\" fill=\"" << g.color << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gifslab
