#pragma once

#include <optional>
#include <vector>

#include "gifslab/metric_core.hpp"

namespace gifslab {

/// The explicit plane set X = ({0} x ([0,1] u [2,3])) u {(1/n, i/n)} whose
/// retraction onto the perfect part is discontinuous. The perfect part is
/// discretized at a stated resolution; the isolated points are exact.
class ExampleSpace {
public:
    ExampleSpace(std::size_t n_max, double resolution);

    std::size_t n_max() const { return n_max_; }
    double resolution() const { return resolution_; }
    const CompactNet& perfect_part() const { return perfect_part_; }
    const CompactNet& isolated_part() const { return isolated_part_; }

    /// The net of {0} x [0,1] (the lower half of the perfect part).
    CompactNet lower_segment() const;

    bool contains(const Point& p) const;

private:
    std::size_t n_max_;
    double resolution_;
    CompactNet perfect_part_;
    CompactNet isolated_part_;
};

ExampleSpace build_example_space(std::size_t n_max, double resolution);

/// K n X*: the part of K on the perfect component. Empty intersections are
/// reported as nullopt; by the appendix convention the empty set sits at
/// distance 1 from every nonempty compact subset of X*.
std::optional<CompactNet> retract(const CompactNet& k, const ExampleSpace& space);

/// Hausdorff distance extended by the appendix convention H(empty, A) = 1;
/// two empty sets are at distance 0.
double hausdorff_with_empty(const std::optional<CompactNet>& a,
                            const std::optional<CompactNet>& b);

struct DiscontinuityWitness {
    double h1 = 0.0;  // H(K_n, K): goes to 0 as n grows
    double h2 = 0.0;  // H(R(K_n), R(K)): stays 1
};

/// K_n = {(0,0)} u {(1/n, i/n): i = 0..n} against K = {0} x [0,1]:
/// h1 = H(K_n, K) shrinks like sqrt(5)/(2n) while the retracted distance h2
/// is exactly 1 for every n.
DiscontinuityWitness discontinuity_witness(std::size_t n, const ExampleSpace& space);

/// K_n itself (exact isolated points plus the origin).
CompactNet witness_sequence_element(std::size_t n, const ExampleSpace& space);

}  // namespace gifslab
