#pragma once

#include <map>
#include <string>
#include <vector>

#include "gifslab/address_space.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double diam() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

/// Distance between closed intervals (0 when they overlap).
double interval_distance(const Interval& a, const Interval& b);

/// Nested system of closed 1-D cells C_{i_1...i_n} with per-depth diameter
/// bounds b_n, gap factor q >= 2 and an indexing function for the odd-level
/// spread/cluster condition. Construction validates shape only (every
/// admissible address present, nesting paths resolvable); the quantitative
/// conditions are re-checkable at any time via verify_conditions, so no
/// state is trusted after deserialization.
class CellTree {
public:
    CellTree(double q, ArityProfile profile, Interval ambient, std::vector<double> diam_bounds,
             IndexingFunction phi, std::map<Address, Interval> cells);

    double q() const { return q_; }
    const ArityProfile& profile() const { return profile_; }
    std::size_t depth() const { return profile_.depth(); }
    const Interval& ambient() const { return ambient_; }
    const std::vector<double>& diam_bounds() const { return diam_bounds_; }
    double diam_bound(std::size_t n) const;  // b_n, 1-based
    const IndexingFunction& phi() const { return phi_; }

    const Interval& cell(const Address& a) const;
    const std::map<Address, Interval>& cells() const { return cells_; }
    std::vector<std::pair<Address, Interval>> cells_at_depth(std::size_t n) const;

    /// Extends a prefix with all-ones digits down to the leaf depth.
    Address all_ones_extension(const Address& prefix) const;

    /// Representative point of a cell: the left endpoint of its deepest
    /// all-ones descendant cell (approximates the coded point x_{(a,1,1,...)}).
    Point representative(const Address& prefix) const;

    /// Leaf cell containing the coordinate, or nullptr.
    const Address* leaf_containing(double x) const;

private:
    double q_;
    ArityProfile profile_;
    Interval ambient_;
    std::vector<double> diam_bounds_;
    IndexingFunction phi_;
    std::map<Address, Interval> cells_;
    std::vector<std::pair<Interval, Address>> leaf_index_;  // sorted by lo
};

struct ConditionResult {
    bool pass = false;
    double margin = 0.0;  // worst-case slack of the condition's inequality
    std::string detail;   // human-readable witness of the worst case
};

/// Per-condition outcome of the balanced-set definition. Conditions (iv)
/// and (v) are strict inequalities and must clear strict_threshold; the
/// non-strict (i)-(iii) pass at margin >= 0.
struct VerifyReport {
    ConditionResult growth;      // (i)  arity growth
    ConditionResult nesting;     // (ii) child cells inside parents
    ConditionResult diameter;    // (iii) diam <= b_n
    ConditionResult separation;  // (iv) pairwise gaps > q b_n
    ConditionResult odd_level;   // (v)  spread/cluster at odd levels
    double strict_threshold = 0.0;

    bool all_pass() const {
        return growth.pass && nesting.pass && diameter.pass && separation.pass && odd_level.pass;
    }
};

/// Checks conditions (i)-(v) exhaustively against the exact cell intervals.
VerifyReport verify_conditions(const CellTree& tree);

/// Builds a q-balanced cell tree inside `ambient` by recursive top-down
/// placement: at odd levels, children of cells inside C_{Phi(n)} are spread
/// with equal gaps while children of the remaining cells are clustered into
/// a left-aligned block smaller than the spread gap. Cell widths are chosen
/// by closed-form inequalities with a 10% safety margin before placement.
/// Throws std::runtime_error if the geometry cannot be realized.
CellTree build_balanced_set(double q, const ArityProfile& profile, Interval ambient);

/// One representative point per depth-k cell; the result has resolution
/// b_k and a_1*...*a_k points.
CompactNet materialize_net(const CellTree& tree, std::size_t depth);

/// The unique depth-N address whose leaf cell contains x. Accepts points of
/// any dimension whose coordinates beyond the first are exactly 0 (the
/// first-axis embedding). Throws std::domain_error when x lies in no cell.
Address address_of_point(const CellTree& tree, const Point& x);

}  // namespace gifslab
