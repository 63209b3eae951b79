#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gifslab/address_space.hpp"
#include "gifslab/balanced_builder.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

/// Classical IFS: self-maps with declared Lipschitz bounds < 1.
struct IfsMap {
    std::function<Point(const Point&)> fn;
    double lip = 0.0;
};

class IfsSystem {
public:
    explicit IfsSystem(std::vector<IfsMap> maps);
    const std::vector<IfsMap>& maps() const { return maps_; }
    double contraction() const { return contraction_; }

private:
    std::vector<IfsMap> maps_;
    double contraction_ = 0.0;
};

/// GIFS of finite order m: maps X^m -> X, Lipschitz w.r.t. the maximum
/// metric on the product.
struct GifsMap {
    std::function<Point(const std::vector<Point>&)> fn;
    double lip = 0.0;
};

class GifsSystem {
public:
    GifsSystem(std::size_t order, std::vector<GifsMap> maps);
    std::size_t order() const { return order_; }
    const std::vector<GifsMap>& maps() const { return maps_; }
    double contraction() const { return contraction_; }

private:
    std::size_t order_;
    std::vector<GifsMap> maps_;
    double contraction_ = 0.0;
};

/// Tuple enumeration budget for product-space images. Exceeding the cap is
/// an error, never silent sampling.
struct TuplePolicy {
    std::uint64_t cap = 1'000'000;
};

/// One map of a GIFS of infinite order, encoded symbolically:
///  - AddressTransform: (x_{a_1}, x_{a_2}, ...) -> x_{(prefix, b_1, b_2, ...)}
///    with b_j = 1 + parity sum of digit j over the first a_{j+p}-1 entries;
///    declared bound q^{-p}.
///  - PiecewiseUnion: the AddressTransform on sequences inside l_inf(K),
///    otherwise its value on the constant sequence (anchor, anchor, ...).
///  - Constant: a fixed point of the ambient space; bound 0.
/// Each map declares its input consumption: window() leading entries, each
/// read to digit depth consumed_depth().
class GifsInfMap {
public:
    enum class Kind { AddressTransform, PiecewiseUnion, Constant };

    static GifsInfMap address_transform(std::shared_ptr<const CellTree> tree, Address prefix);
    static GifsInfMap piecewise_union(std::shared_ptr<const CellTree> tree, Address prefix,
                                      Point anchor, CompactNet extra, double declared_lip);
    static GifsInfMap constant(Point value);

    Kind kind() const { return kind_; }
    double declared_lip() const { return lip_; }
    std::size_t window() const { return window_; }
    std::size_t consumed_depth() const { return consumed_depth_; }
    const Address& prefix() const { return prefix_; }
    const CellTree& tree() const { return *tree_; }
    std::shared_ptr<const CellTree> tree_ptr() const { return tree_; }
    const Point& anchor() const { return anchor_; }
    const CompactNet& extra() const { return *extra_; }
    std::string name() const;

private:
    GifsInfMap() = default;
    Kind kind_ = Kind::Constant;
    double lip_ = 0.0;
    std::size_t window_ = 0;
    std::size_t consumed_depth_ = 0;
    std::shared_ptr<const CellTree> tree_;
    Address prefix_;
    Point anchor_;
    std::optional<CompactNet> extra_;
};

/// Applies one GIFS_inf map to a truncated bounded sequence of net points.
/// Reads f.window() leading entries (the tail rule fills missing ones), each
/// to digit depth f.consumed_depth(). The output matches the input dimension
/// (first-axis embedding).
Point apply_inf_map(const GifsInfMap& f, const BoundedSeq& s);

class GifsInfSystem {
public:
    GifsInfSystem(std::vector<GifsInfMap> maps, std::shared_ptr<const CellTree> tree,
                  std::optional<CompactNet> extra = std::nullopt);
    const std::vector<GifsInfMap>& maps() const { return maps_; }
    const CellTree& tree() const { return *tree_; }
    std::shared_ptr<const CellTree> tree_ptr() const { return tree_; }
    const std::optional<CompactNet>& extra() const { return extra_; }
    double contraction() const { return contraction_; }

private:
    std::vector<GifsInfMap> maps_;
    std::shared_ptr<const CellTree> tree_;
    std::optional<CompactNet> extra_;
    double contraction_ = 0.0;
};

/// Hutchinson step of the classical IFS: union of map images, deduplicated;
/// resolution scales by the declared contraction factor.
CompactNet hutchinson_step_ifs(const IfsSystem& sys, const CompactNet& s);

/// Hutchinson step of a finite-order GIFS: exhaustive m-fold tuples of s.
CompactNet hutchinson_step_gifs(const GifsSystem& sys, const CompactNet& s,
                                const TuplePolicy& policy = {});

/// Hutchinson step of a GIFS_inf. Each map reads only its consumption
/// window, so tuples are enumerated exhaustively over the distinct
/// consumed digit prefixes present in s (an exact quotient of the full
/// tuple space; the image is finite, so the closure is the identity here).
CompactNet hutchinson_step_inf(const GifsInfSystem& sys, const CompactNet& s,
                               const TuplePolicy& policy = {});

struct IterationResult {
    CompactNet net;
    std::vector<double> trace;  // Hausdorff distance per step
    bool converged = false;
    std::size_t steps = 0;
};

/// Banach iteration of an arbitrary Hutchinson step with declared
/// contraction factor c < 1. Stops once the step delta guarantees the fixed
/// point is within tol (delta <= tol*(1-c)/c); if max_iter is exhausted the
/// best iterate is returned with converged = false.
IterationResult iterate_to_fixed_point(const std::function<CompactNet(const CompactNet&)>& step,
                                       double contraction, const CompactNet& s0, double tol,
                                       std::size_t max_iter);

IterationResult iterate_to_fixed_point(const IfsSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter);
IterationResult iterate_to_fixed_point(const GifsSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy = {});
IterationResult iterate_to_fixed_point(const GifsInfSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy = {});

/// trace[k] <= trace[0] * ratio^k + slack for all k.
bool geometric_domination(const std::vector<double>& trace, double ratio, double slack);

/// The a_1 witnessing maps with declared bound 1/q. Condition (C1) holds
/// automatically for continuous self-maps into a compact set; recorded, not
/// recomputed.
GifsInfSystem build_witness_system(std::shared_ptr<const CellTree> tree);

/// Refined system: depth-p prefixes with p minimal such that q^{-p} < r,
/// declared bound q^{-p}. p = 1 reduces to the witness system.
GifsInfSystem build_refined_system(std::shared_ptr<const CellTree> tree, double r);

/// System for the union R = K u P of the balanced set and a disjoint finite
/// set: piecewise extensions of a refined base system with target bound
/// r * min(1, dist(K,P)/diam(K)), anchored at the all-ones coded point, plus
/// one constant map per point of P. All declared bounds are <= r.
GifsInfSystem build_union_system(std::shared_ptr<const CellTree> tree, const CompactNet& extra,
                                 double r);

struct MapCertificate {
    std::string map_name;
    double declared_bound = 0.0;
    double max_ratio = 0.0;  // worst (cell-diameter numerator)/(cell-gap denominator)
    std::uint64_t pairs_checked = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

struct LipschitzCertificate {
    std::vector<MapCertificate> maps;
    bool pass() const;
    /// Largest declared bound among the certified maps.
    double certified_bound() const;
};

/// Certifies the declared Lipschitz bounds over every exhaustive pair of
/// input tuples (distinct consumed digit prefixes) of the depth-N net. Per
/// pair it locates the first differing output digit eta, bounds the
/// numerator by the exact diameter of the shared output-prefix cell
/// (asserting <= b_eta) and the denominator by the exact gap between the
/// first differing input cells (asserting > q b_eta); point distances are
/// never used. Piecewise maps additionally certify the in/out/mixed cases
/// of the union construction with the dist(K,P) denominator.
LipschitzCertificate certify_lipschitz(const GifsInfSystem& sys, const TuplePolicy& policy = {});

struct ImageCharacterization {
    bool equal = false;
    std::vector<Address> brute;          // exhaustive over consumed-prefix tuples
    std::vector<Address> combinatorial;  // achievable parity sums per digit
};

/// Computes f(K_1 x K_2 x ...) two ways and compares: exhaustively over the
/// distinct consumed prefixes of each K_k, and combinatorially by the
/// achievable parity-sum vectors (a DP that honors entries shared between
/// digit windows). Both images are finite, hence closed.
ImageCharacterization check_image_characterization(const GifsInfMap& f,
                                                   const std::vector<CompactNet>& ks,
                                                   const TuplePolicy& policy = {});

struct C1Check {
    bool ok = false;
    double image_diameter = 0.0;
    double bound = 0.0;  // Lip(f) * diam(union K_k)
};

/// Boundedness shadow of condition (C1): the image diameter is at most
/// Lip(f) * diam(union of the K_k), within 1e-9.
C1Check check_c1_boundedness(const GifsInfMap& f, const std::vector<CompactNet>& ks,
                             const TuplePolicy& policy = {});

}  // namespace gifslab
