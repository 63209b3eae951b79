#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gifslab {

/// A point of the ambient Euclidean space R^n, n >= 1. Coordinates must be
/// finite; the dimension is fixed per ambient-space context.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    static Point scalar(double x) { return Point({x}); }

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

private:
    std::vector<double> coords_;
};

/// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
double distance(const Point& a, const Point& b);

/// Lexicographic order on coordinates (total order used for canonical storage).
bool lex_less(const Point& a, const Point& b);

/// Finite nonempty point set representing a compact set at a stated
/// resolution. resolution is the guaranteed Hausdorff distance to the ideal
/// set the net stands for (0 = exact). Points are stored sorted
/// lexicographically and deduplicated, so equal nets compare equal.
class CompactNet {
public:
    CompactNet(std::vector<Point> points, double resolution = 0.0);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return points_.front().dim(); }
    double resolution() const { return resolution_; }
    const std::vector<Point>& points() const { return points_; }

    /// Exact membership test (bitwise coordinate equality).
    bool contains(const Point& x) const;

    friend bool operator==(const CompactNet& a, const CompactNet& b) {
        return a.points_ == b.points_;
    }

private:
    std::vector<Point> points_;
    double resolution_ = 0.0;
};

/// Hausdorff-Pompeiu distance max(sup_a inf_b d, sup_b inf_a d).
/// Exhaustive double loop; 1-D nets take a sorted-sweep fast path with the
/// same contract. Deterministic regardless of worker count.
double hausdorff_distance(const CompactNet& a, const CompactNet& b);

/// dist(A,B) = min over pairs of d(a,b).
double set_distance(const CompactNet& a, const CompactNet& b);

/// Max pairwise distance; 0 for singletons.
double diameter(const CompactNet& a);

/// True iff some a in A has d(a,x) < r (strict). Requires r > 0.
bool neighborhood_contains(const CompactNet& a, double r, const Point& x);

/// Set union of two nets; resolution is the max of the two.
CompactNet merge(const CompactNet& a, const CompactNet& b);

/// Places a 1-D net on the first axis of R^dim (isometric embedding).
CompactNet embed_first_axis(const CompactNet& one_dimensional, std::size_t dim);

/// How entries of a bounded sequence continue past the stored depth.
enum class TailRule { RepeatLast, DesignatedPoint };

/// Truncated representation of a bounded sequence in X: T stored entries plus
/// a constant tail. Operations that consume a BoundedSeq document how many
/// leading entries they read; entry(n) transparently applies the tail rule.
class BoundedSeq {
public:
    BoundedSeq(std::vector<Point> entries, TailRule rule = TailRule::RepeatLast,
               std::optional<Point> designated = std::nullopt);

    std::size_t depth() const { return entries_.size(); }
    std::size_t dim() const { return entries_.front().dim(); }
    TailRule tail_rule() const { return rule_; }

    /// n is 0-based; indices >= depth() resolve through the tail rule.
    const Point& entry(std::size_t n) const {
        return n < entries_.size() ? entries_[n] : tail_point();
    }
    const Point& tail_point() const;
    const std::vector<Point>& entries() const { return entries_; }

private:
    std::vector<Point> entries_;
    TailRule rule_;
    std::optional<Point> designated_;
};

struct SeqMetricResult {
    double value = 0.0;
    /// Upper bound on the gap to the un-truncated supremum. Constant tails
    /// make the tail contribution exactly computable, so this is 0.
    double truncation_slack = 0.0;
};

/// Weighted supremum metric d_q((x_n),(y_n)) = sup_n q^{n-1} d(x_n, y_n) for
/// q in (0,1]; q = 1 is the plain supremum metric. The constant tails are
/// folded in exactly (weight q^T), so the result is the true supremum.
SeqMetricResult seq_metric(double q, const BoundedSeq& x, const BoundedSeq& y);

}  // namespace gifslab
