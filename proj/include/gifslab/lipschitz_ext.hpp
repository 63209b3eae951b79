#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gifslab/gifs_systems.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

/// A map known through finitely many anchors together with a declared
/// Lipschitz bound L. Anchor inputs are window tuples whose slots are finite
/// point sets drawn from a shared pool; a set-valued slot stands for every
/// member tuple at once (all members of one anchor share its output), and
/// the exact distance between product families factors per slot:
///   d(anchor_i, anchor_j) = max_slot set_distance(slot_i, slot_j).
/// Plain point anchors are the window-1, singleton-slot special case.
class SampledMap {
public:
    struct Anchor {
        std::vector<std::uint32_t> slots;  // indices into the pool
        Point output;
    };

    SampledMap(std::vector<CompactNet> pool, std::vector<Anchor> anchors, double lip,
               bool validate = true);

    /// Graph of a point-to-point map: each anchor is (input point -> output).
    static SampledMap from_points(const std::vector<std::pair<Point, Point>>& graph, double lip,
                                  bool validate = true);

    double lip() const { return lip_; }
    std::size_t window() const { return window_; }
    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    const std::vector<Anchor>& anchors() const { return anchors_; }
    const std::vector<CompactNet>& pool() const { return pool_; }

    /// Exact distance between two anchors' input families.
    double anchor_distance(std::size_t i, std::size_t j) const;
    /// max over slots of the distance from x_slot to the anchor's slot set.
    double input_distance(const std::vector<Point>& x, std::size_t anchor) const;

    /// Checks d(out_i, out_j) <= L * d(in_i, in_j) + 1e-12 * scale over all
    /// anchor pairs; throws std::invalid_argument on the first violation.
    void validate_consistency() const;

private:
    std::vector<CompactNet> pool_;
    std::vector<Anchor> anchors_;
    std::vector<double> pool_dist_;  // set_distance cache, pool x pool
    double lip_ = 0.0;
    std::size_t window_ = 0;
    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
};

/// Max over anchor pairs of d(out)/d(in); +infinity when two anchors share
/// an input but not an output. Requires >= 2 anchors.
double estimate_lipschitz(const SampledMap& f);

/// Per-coordinate McShane extension, min-form:
///   ext_c(x) = min over anchors of (out_c + L * d(x, anchor)).
/// Agrees with the sampled map exactly on anchor families (the minimum is
/// attained at distance zero); each coordinate is L-Lipschitz, the vector
/// map is sqrt(out_dim) * L - Lipschitz.
Point mcshane_extend(const SampledMap& f, const std::vector<Point>& x);
Point mcshane_extend(const SampledMap& f, const Point& x);

/// One witnessing map extended from l_inf(K) to sequences over all of R^dim.
/// The anchor table holds every consumed digit-prefix class of the base
/// transform, so the extension agrees with the base map on every net tuple.
class ExtendedMap {
public:
    ExtendedMap(GifsInfMap base, std::size_t dim);

    const GifsInfMap& base() const { return base_; }
    std::size_t dim() const { return dim_; }
    std::size_t window() const { return base_.window(); }
    double base_lip() const { return base_.declared_lip(); }
    double ambient_lip() const { return ambient_lip_; }
    const SampledMap& sampled() const { return sampled_; }

    /// Evaluates the extension on a window tuple of ambient points. Values
    /// on net tuples reproduce the base transform bitwise.
    Point apply(const std::vector<Point>& window_tuple) const;

private:
    GifsInfMap base_;
    std::size_t dim_;
    double ambient_lip_;
    SampledMap sampled_;
    // evaluation tables: per class, parity profile and output lookup by
    // achievable parity-sum state
    std::vector<std::vector<std::uint8_t>> class_parity_;
    std::vector<std::uint32_t> digit_window_;
    std::vector<std::uint32_t> state_stride_;
    std::vector<Point> state_output_;
    std::size_t state_count_ = 0;
};

class ExtendedSystem {
public:
    ExtendedSystem(std::vector<ExtendedMap> maps, std::shared_ptr<const CellTree> tree,
                   std::size_t dim);
    const std::vector<ExtendedMap>& maps() const { return maps_; }
    const CellTree& tree() const { return *tree_; }
    std::size_t dim() const { return dim_; }
    double contraction() const { return contraction_; }

private:
    std::vector<ExtendedMap> maps_;
    std::shared_ptr<const CellTree> tree_;
    std::size_t dim_;
    double contraction_ = 0.0;
};

/// Builds the refined base system with bound <= r/sqrt(dim) and extends each
/// map to ambient sequence space; the declared ambient bound is
/// sqrt(dim) * q^{-p} <= r. The K-net (embedded on the first axis) is fixed
/// by one Hutchinson step of the result.
ExtendedSystem extend_system(std::shared_ptr<const CellTree> tree, std::size_t dim, double r);
ExtendedSystem extend_system(const GifsInfSystem& sys, std::size_t dim, double r);

/// Hutchinson step of an extended system. When every point of s lies on the
/// embedded net the tuple space collapses to the base transform's digit
/// classes (the extension agrees with the base there); otherwise tuples are
/// enumerated exhaustively over s^window under the cap.
CompactNet hutchinson_step_extended(const ExtendedSystem& sys, const CompactNet& s,
                                    const TuplePolicy& policy = {});

IterationResult iterate_to_fixed_point(const ExtendedSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy = {});

}  // namespace gifslab
