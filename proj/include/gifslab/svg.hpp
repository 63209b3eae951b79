#pragma once

#include <string>
#include <vector>

#include "gifslab/balanced_builder.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

/// Static SVG renderings; no timestamps or other run-dependent metadata, so
/// identical inputs give byte-identical files.

/// Cells of each depth as horizontal bars, one row per depth, with the
/// depth-N net drawn as ticks underneath. Depths beyond max_depth are
/// omitted (deep cells are thinner than a pixel anyway).
std::string svg_tree(const CellTree& tree, std::size_t max_depth = 3);

/// Convergence trace as a log-scale polyline.
std::string svg_trace(const std::vector<double>& trace);

/// Scatter of labelled 2-D point groups (used by the appendix demo).
struct ScatterGroup {
    std::string color;
    double radius = 1.5;
    std::vector<Point> points;
};
std::string svg_scatter(const std::vector<ScatterGroup>& groups);

}  // namespace gifslab
