#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gifslab/balanced_builder.hpp"
#include "gifslab/lipschitz_ext.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

/// Nondecreasing, right-continuous h with h(0) = 0 and h(t) > 0 for t > 0.
/// Either a power law t^s or a tabulated step function (right-continuous by
/// convention).
class GaugeFunction {
public:
    static GaugeFunction power_law(double exponent);
    /// Steps (t_i, v_i) sorted by t; h(t) = v_i for t in [t_i, t_{i+1}),
    /// h(t) = 0 for t < t_0, h(t) = v_last beyond the table.
    static GaugeFunction tabulated(std::vector<std::pair<double, double>> steps);

    double operator()(double t) const;
    const std::string& descriptor() const { return descriptor_; }

private:
    GaugeFunction() = default;
    std::function<double(double)> eval_;
    std::string descriptor_;
};

/// Parses "t^0.6309"-style descriptors (used by the CLI).
GaugeFunction parse_gauge(const std::string& text);

/// Sum of h(diam) over an explicit cover by intervals; an upper bound on
/// the delta-premeasure when every diameter is <= delta (checked).
double premeasure_cell_cover(const std::vector<Interval>& cells, const GaugeFunction& h,
                             double delta);

/// Cover by the depth-n cells of a tree; requires b_n <= delta.
double premeasure_upper(const CellTree& tree, std::size_t depth, const GaugeFunction& h,
                        double delta);

/// Greedy 1-D cover: maximal runs of gap <= delta, each split into equal
/// pieces of length <= delta. Upper bound on the delta-premeasure.
double premeasure_upper(const CompactNet& net, const GaugeFunction& h, double delta);

/// Upper bound on the premeasure of the overlap of the net with its image
/// under a sampled contraction: the points of the net within the net's
/// resolution of f(net), covered greedily. Returns 0 for an empty overlap
/// (diam of the empty set is 0). Illustration only; no convergence claim.
double overlap_upper(const CellTree& tree, const SampledMap& f, const GaugeFunction& h,
                     double delta);

/// The 2^m closed depth-m cells of the ternary Cantor construction on [0,1].
std::vector<Interval> ternary_cantor_cells(std::size_t m);

/// Net of all endpoints of the depth-m ternary Cantor cells.
CompactNet ternary_cantor_net(std::size_t m);

}  // namespace gifslab
