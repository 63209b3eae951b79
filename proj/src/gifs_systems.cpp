#include "gifslab/gifs_systems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gifslab/parallel.hpp"

namespace gifslab {

namespace {

Point embed_scalar(double v, std::size_t dim) {
    std::vector<double> c(dim, 0.0);
    c[0] = v;
    return Point(std::move(c));
}

bool on_first_axis(const Point& x) {
    for (std::size_t i = 1; i < x.dim(); ++i)
        if (x[i] != 0.0) return false;
    return true;
}

/// Distinct depth-d address prefixes of the points of a net, sorted.
std::vector<Address> class_prefixes(const CellTree& tree, const std::vector<Point>& pts,
                                    std::size_t d) {
    std::set<Address> classes;
    for (const Point& p : pts) {
        Address leaf = address_of_point(tree, p);
        classes.insert(leaf.prefix(d));
    }
    return {classes.begin(), classes.end()};
}

std::uint64_t checked_tuple_count(const std::vector<std::vector<Address>>& slots,
                                  const TuplePolicy& policy) {
    double approx = 1.0;
    std::uint64_t count = 1;
    for (const auto& s : slots) {
        approx *= static_cast<double>(s.size());
        if (approx > static_cast<double>(policy.cap))
            throw std::runtime_error("tuple enumeration would exceed the cap of " +
                                     std::to_string(policy.cap) + " tuples");
        count *= s.size();
    }
    return count;
}

/// Exhaustive odometer over the product of per-slot address lists.
template <class Fn>
void for_each_class_tuple(const std::vector<std::vector<Address>>& slots,
                          const TuplePolicy& policy, Fn&& fn) {
    checked_tuple_count(slots, policy);
    const std::size_t w = slots.size();
    std::vector<std::size_t> idx(w, 0);
    std::vector<const Address*> chosen(w);
    for (std::size_t m = 0; m < w; ++m) {
        if (slots[m].empty()) return;  // empty product
        chosen[m] = &slots[m][0];
    }
    while (true) {
        fn(chosen);
        std::size_t m = w;
        while (m > 0) {
            if (idx[m - 1] + 1 < slots[m - 1].size()) {
                ++idx[m - 1];
                chosen[m - 1] = &slots[m - 1][idx[m - 1]];
                break;
            }
            idx[m - 1] = 0;
            chosen[m - 1] = &slots[m - 1][0];
            --m;
        }
        if (m == 0) break;
    }
}

Address transform_of_chosen(const GifsInfMap& f, const std::vector<const Address*>& chosen) {
    const CellTree& tree = f.tree();
    const ArityProfile& profile = tree.profile();
    const std::size_t p = f.prefix().depth();
    const std::size_t n = tree.depth();
    Address out = f.prefix();
    for (std::size_t j = 1; j + p <= n; ++j) {
        const std::uint32_t window = profile.arity(j + p) - 1;
        std::uint32_t parity_sum = 0;
        for (std::uint32_t m = 0; m < window; ++m) parity_sum += chosen[m]->digits[j - 1] % 2;
        out.digits.push_back(1 + parity_sum);
    }
    return out;
}

/// Image of an address-transformer over exhaustive tuples of the given
/// per-slot consumed-prefix classes; returns output leaf addresses.
std::set<Address> transform_image(const GifsInfMap& f, const std::vector<std::vector<Address>>& slots,
                                  const TuplePolicy& policy) {
    std::set<Address> out;
    for_each_class_tuple(slots, policy, [&](const std::vector<const Address*>& chosen) {
        out.insert(f.tree().all_ones_extension(transform_of_chosen(f, chosen)));
    });
    return out;
}

}  // namespace

IfsSystem::IfsSystem(std::vector<IfsMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw std::invalid_argument("IfsSystem: needs at least one map");
    for (const IfsMap& m : maps_) {
        if (!(m.lip >= 0.0 && m.lip < 1.0))
            throw std::invalid_argument("IfsSystem: declared bounds must lie in [0,1)");
        contraction_ = std::max(contraction_, m.lip);
    }
}

GifsSystem::GifsSystem(std::size_t order, std::vector<GifsMap> maps)
    : order_(order), maps_(std::move(maps)) {
    if (order_ < 1) throw std::invalid_argument("GifsSystem: order must be >= 1");
    if (maps_.empty()) throw std::invalid_argument("GifsSystem: needs at least one map");
    for (const GifsMap& m : maps_) {
        if (!(m.lip >= 0.0 && m.lip < 1.0))
            throw std::invalid_argument("GifsSystem: declared bounds must lie in [0,1)");
        contraction_ = std::max(contraction_, m.lip);
    }
}

GifsInfMap GifsInfMap::address_transform(std::shared_ptr<const CellTree> tree, Address prefix) {
    if (!tree) throw std::invalid_argument("GifsInfMap: tree required");
    const std::size_t p = prefix.depth();
    if (p < 1 || p > tree->depth())
        throw std::invalid_argument("GifsInfMap: prefix depth out of range");
    for (std::size_t j = 0; j < p; ++j)
        if (prefix.digits[j] < 1 || prefix.digits[j] > tree->profile().arity(j + 1))
            throw std::invalid_argument("GifsInfMap: prefix digit out of range");
    GifsInfMap f;
    f.kind_ = Kind::AddressTransform;
    f.tree_ = std::move(tree);
    f.prefix_ = std::move(prefix);
    f.lip_ = std::pow(f.tree_->q(), -static_cast<double>(p));
    f.consumed_depth_ = f.tree_->depth() - p;
    f.window_ = f.consumed_depth_ > 0
                    ? transform_window(f.tree_->profile(), p, f.tree_->depth())
                    : 0;
    return f;
}

GifsInfMap GifsInfMap::piecewise_union(std::shared_ptr<const CellTree> tree, Address prefix,
                                       Point anchor, CompactNet extra, double declared_lip) {
    GifsInfMap f = address_transform(std::move(tree), std::move(prefix));
    f.kind_ = Kind::PiecewiseUnion;
    f.anchor_ = std::move(anchor);
    f.extra_ = std::move(extra);
    f.lip_ = declared_lip;
    return f;
}

GifsInfMap GifsInfMap::constant(Point value) {
    GifsInfMap f;
    f.kind_ = Kind::Constant;
    f.anchor_ = std::move(value);
    f.lip_ = 0.0;
    return f;
}

std::string GifsInfMap::name() const {
    switch (kind_) {
        case Kind::AddressTransform: return "f[" + prefix_.str() + "]";
        case Kind::PiecewiseUnion: return "f~[" + prefix_.str() + "]";
        case Kind::Constant: return "h[const]";
    }
    return "?";
}

Point apply_inf_map(const GifsInfMap& f, const BoundedSeq& s) {
    if (f.kind() == GifsInfMap::Kind::Constant) {
        return s.dim() == f.anchor().dim() ? f.anchor() : embed_scalar(f.anchor()[0], s.dim());
    }
    const CellTree& tree = f.tree();
    const std::size_t w = f.window();
    std::vector<Address> inputs;
    inputs.reserve(w);
    bool all_in_k = true;
    for (std::size_t m = 0; m < w; ++m) {
        const Point& x = s.entry(m);
        const Address* leaf = on_first_axis(x) ? tree.leaf_containing(x[0]) : nullptr;
        if (leaf) {
            inputs.push_back(leaf->prefix(f.consumed_depth()));
            continue;
        }
        all_in_k = false;
        if (f.kind() != GifsInfMap::Kind::PiecewiseUnion)
            throw std::domain_error("apply_inf_map: entry " + std::to_string(m + 1) +
                                    " lies outside the balanced set");
        // piecewise: entries may instead lie in the finite companion set
        const Point flat = x.dim() == 1 ? x : Point::scalar(x[0]);
        if (!(on_first_axis(x) && f.extra().contains(flat)))
            throw std::domain_error("apply_inf_map: entry " + std::to_string(m + 1) +
                                    " lies outside K u P");
        inputs.push_back(Address{});  // placeholder, replaced by the anchor class below
    }
    if (!all_in_k) {
        // value on the constant sequence (anchor, anchor, ...)
        const Address anchor_class =
            address_of_point(tree, f.anchor()).prefix(f.consumed_depth());
        inputs.assign(w, anchor_class);
    }
    std::vector<const Address*> chosen(w);
    for (std::size_t m = 0; m < w; ++m) chosen[m] = &inputs[m];
    const Address out = transform_of_chosen(f, chosen);
    const double v = tree.representative(out)[0];
    return embed_scalar(v, s.dim());
}

GifsInfSystem::GifsInfSystem(std::vector<GifsInfMap> maps, std::shared_ptr<const CellTree> tree,
                             std::optional<CompactNet> extra)
    : maps_(std::move(maps)), tree_(std::move(tree)), extra_(std::move(extra)) {
    if (maps_.empty()) throw std::invalid_argument("GifsInfSystem: needs at least one map");
    if (!tree_) throw std::invalid_argument("GifsInfSystem: domain tree required");
    for (const GifsInfMap& m : maps_) {
        if (m.kind() != GifsInfMap::Kind::Constant && m.tree_ptr() != tree_)
            throw std::invalid_argument("GifsInfSystem: maps must share the domain tree");
        contraction_ = std::max(contraction_, m.declared_lip());
    }
    if (!(contraction_ < 1.0))
        throw std::invalid_argument("GifsInfSystem: declared bounds must stay below 1");
}

CompactNet hutchinson_step_ifs(const IfsSystem& sys, const CompactNet& s) {
    std::vector<Point> out;
    out.reserve(sys.maps().size() * s.size());
    for (const IfsMap& m : sys.maps())
        for (const Point& p : s.points()) out.push_back(m.fn(p));
    return CompactNet(std::move(out), sys.contraction() * s.resolution());
}

CompactNet hutchinson_step_gifs(const GifsSystem& sys, const CompactNet& s,
                                const TuplePolicy& policy) {
    const std::size_t m = sys.order();
    double approx = std::pow(static_cast<double>(s.size()), static_cast<double>(m));
    if (approx > static_cast<double>(policy.cap))
        throw std::runtime_error("hutchinson_step_gifs: |S|^m exceeds the tuple cap of " +
                                 std::to_string(policy.cap));
    std::vector<Point> out;
    std::vector<std::size_t> idx(m, 0);
    std::vector<Point> tuple(m, s.points().front());
    while (true) {
        for (const GifsMap& g : sys.maps()) out.push_back(g.fn(tuple));
        std::size_t j = m;
        while (j > 0) {
            if (idx[j - 1] + 1 < s.size()) {
                ++idx[j - 1];
                tuple[j - 1] = s.points()[idx[j - 1]];
                break;
            }
            idx[j - 1] = 0;
            tuple[j - 1] = s.points()[0];
            --j;
        }
        if (j == 0) break;
    }
    return CompactNet(std::move(out), sys.contraction() * s.resolution());
}

CompactNet hutchinson_step_inf(const GifsInfSystem& sys, const CompactNet& s,
                               const TuplePolicy& policy) {
    const CellTree& tree = sys.tree();
    const std::size_t dim = s.dim();

    // Split s into the part inside the balanced set and the rest.
    std::vector<Point> in_k;
    std::vector<Point> outside;
    for (const Point& p : s.points()) {
        if (on_first_axis(p) && tree.leaf_containing(p[0]) != nullptr)
            in_k.push_back(p);
        else
            outside.push_back(p);
    }

    std::vector<Point> out;
    for (const GifsInfMap& f : sys.maps()) {
        switch (f.kind()) {
            case GifsInfMap::Kind::Constant: {
                const Point& v = f.anchor();
                out.push_back(v.dim() == dim ? v : embed_scalar(v[0], dim));
                break;
            }
            case GifsInfMap::Kind::AddressTransform: {
                if (!outside.empty())
                    throw std::domain_error("hutchinson_step_inf: S has points outside the set");
                const auto classes = class_prefixes(tree, in_k, f.consumed_depth());
                std::vector<std::vector<Address>> slots(f.window(), classes);
                for (const Address& a : transform_image(f, slots, policy))
                    out.push_back(embed_scalar(tree.cell(a).lo, dim));
                break;
            }
            case GifsInfMap::Kind::PiecewiseUnion: {
                for (const Point& p : outside) {
                    const Point flat = p.dim() == 1 ? p : Point::scalar(p[0]);
                    if (!(on_first_axis(p) && f.extra().contains(flat)))
                        throw std::domain_error("hutchinson_step_inf: S has points outside K u P");
                }
                if (!in_k.empty()) {
                    const auto classes = class_prefixes(tree, in_k, f.consumed_depth());
                    std::vector<std::vector<Address>> slots(f.window(), classes);
                    for (const Address& a : transform_image(f, slots, policy))
                        out.push_back(embed_scalar(tree.cell(a).lo, dim));
                }
                if (!outside.empty() || in_k.empty()) {
                    // some tuple leaves l_inf(K): contributes f(anchor, anchor, ...)
                    const Address anchor_class =
                        address_of_point(tree, f.anchor()).prefix(f.consumed_depth());
                    std::vector<std::vector<Address>> slots(f.window(), {anchor_class});
                    for (const Address& a : transform_image(f, slots, policy))
                        out.push_back(embed_scalar(tree.cell(a).lo, dim));
                }
                break;
            }
        }
    }
    return CompactNet(std::move(out), sys.contraction() * s.resolution());
}

IterationResult iterate_to_fixed_point(const std::function<CompactNet(const CompactNet&)>& step,
                                       double contraction, const CompactNet& s0, double tol,
                                       std::size_t max_iter) {
    if (!(contraction >= 0.0 && contraction < 1.0))
        throw std::invalid_argument("iterate_to_fixed_point: declared factor must lie in [0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("iterate_to_fixed_point: tol must be > 0");
    const double threshold = contraction > 0.0 ? tol * (1.0 - contraction) / contraction : 0.0;

    IterationResult result{s0, {}, false, 0};
    CompactNet current = s0;
    for (std::size_t k = 0; k < max_iter; ++k) {
        CompactNet next = step(current);
        const double delta = hausdorff_distance(current, next);
        result.trace.push_back(delta);
        result.net = next;
        result.steps = k + 1;
        if (delta <= threshold) {
            result.converged = true;
            return result;
        }
        current = std::move(next);
    }
    return result;  // max_iter exhausted, best iterate with converged = false
}

IterationResult iterate_to_fixed_point(const IfsSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter) {
    return iterate_to_fixed_point([&](const CompactNet& s) { return hutchinson_step_ifs(sys, s); },
                                  sys.contraction(), s0, tol, max_iter);
}

IterationResult iterate_to_fixed_point(const GifsSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy) {
    return iterate_to_fixed_point(
        [&](const CompactNet& s) { return hutchinson_step_gifs(sys, s, policy); },
        sys.contraction(), s0, tol, max_iter);
}

IterationResult iterate_to_fixed_point(const GifsInfSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy) {
    return iterate_to_fixed_point(
        [&](const CompactNet& s) { return hutchinson_step_inf(sys, s, policy); },
        sys.contraction(), s0, tol, max_iter);
}

bool geometric_domination(const std::vector<double>& trace, double ratio, double slack) {
    if (trace.empty()) return true;
    double bound = trace.front();
    for (double d : trace) {
        if (d > bound + slack) return false;
        bound *= ratio;
    }
    return true;
}

GifsInfSystem build_witness_system(std::shared_ptr<const CellTree> tree) {
    if (!tree) throw std::invalid_argument("build_witness_system: tree required");
    std::vector<GifsInfMap> maps;
    const std::uint32_t a1 = tree->profile().arity(1);
    maps.reserve(a1);
    for (std::uint32_t i = 1; i <= a1; ++i)
        maps.push_back(GifsInfMap::address_transform(tree, Address{{i}}));
    return GifsInfSystem(std::move(maps), std::move(tree));
}

GifsInfSystem build_refined_system(std::shared_ptr<const CellTree> tree, double r) {
    if (!tree) throw std::invalid_argument("build_refined_system: tree required");
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("build_refined_system: r must lie in (0,1)");
    std::size_t p = 1;
    while (std::pow(tree->q(), -static_cast<double>(p)) >= r) {
        ++p;
        if (p > tree->depth())
            throw std::invalid_argument(
                "build_refined_system: required prefix depth exceeds the tree depth");
    }
    std::vector<GifsInfMap> maps;
    for (const Address& prefix : enumerate_addresses(tree->profile(), p))
        maps.push_back(GifsInfMap::address_transform(tree, prefix));
    return GifsInfSystem(std::move(maps), std::move(tree));
}

GifsInfSystem build_union_system(std::shared_ptr<const CellTree> tree, const CompactNet& extra,
                                 double r) {
    if (!tree) throw std::invalid_argument("build_union_system: tree required");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("build_union_system: r must lie in (0,1)");
    if (extra.dim() != 1) throw std::invalid_argument("build_union_system: P must be 1-D");
    for (const Point& p : extra.points())
        if (tree->leaf_containing(p[0]) != nullptr)
            throw std::invalid_argument("build_union_system: P intersects the balanced set");

    const CompactNet k_net = materialize_net(*tree, tree->depth());
    const double eta = set_distance(k_net, extra);
    if (!(eta > 0.0)) throw std::invalid_argument("build_union_system: dist(K, P) must be > 0");
    const double diam_k = diameter(k_net);
    const double target = r * std::min(1.0, eta / diam_k);

    GifsInfSystem base = build_refined_system(tree, target);
    const double piecewise_lip = base.contraction() * std::max(1.0, diam_k / eta);

    const Point anchor = tree->representative(Address{});  // all-ones coded point
    std::vector<GifsInfMap> maps;
    for (const GifsInfMap& f : base.maps())
        maps.push_back(
            GifsInfMap::piecewise_union(tree, f.prefix(), anchor, extra, piecewise_lip));
    for (const Point& p : extra.points()) maps.push_back(GifsInfMap::constant(p));
    return GifsInfSystem(std::move(maps), std::move(tree), extra);
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

/// Precomputed tables for the exhaustive pair certificate of one
/// address-transformer map over the depth-N net.
struct TransformTables {
    std::size_t p = 0, d = 0, w = 0;
    std::vector<Address> classes;       // all depth-d prefixes
    std::size_t m = 0;                  // number of classes
    std::vector<std::uint8_t> eta;      // [c*m + e] first differing digit (1-based), 0 = equal
    std::vector<double> gap;            // [c*m + e] exact cell gap at that digit
    std::uint64_t tuples = 0;           // m^w
    std::vector<std::uint16_t> tclass;  // [t*w + slot]
    std::vector<std::uint16_t> beta;    // [t*d + j]
    std::vector<double> diam_pref;      // [t*d + j] diam of output prefix cell, length p+j
};

TransformTables build_tables(const GifsInfMap& f, const TuplePolicy& policy) {
    const CellTree& tree = f.tree();
    const ArityProfile& profile = tree.profile();
    TransformTables t;
    t.p = f.prefix().depth();
    t.d = f.consumed_depth();
    t.w = f.window();
    t.classes = enumerate_addresses(profile, t.d);
    t.m = t.classes.size();
    if (t.m > std::numeric_limits<std::uint16_t>::max())
        throw std::runtime_error("certify_lipschitz: class table too large");

    t.eta.assign(t.m * t.m, 0);
    t.gap.assign(t.m * t.m, std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < t.m; ++c) {
        for (std::size_t e = 0; e < t.m; ++e) {
            if (c == e) continue;
            std::size_t first = 0;
            for (std::size_t j = 0; j < t.d; ++j) {
                if (t.classes[c].digits[j] != t.classes[e].digits[j]) {
                    first = j + 1;
                    break;
                }
            }
            t.eta[c * t.m + e] = static_cast<std::uint8_t>(first);
            if (first > 0)
                t.gap[c * t.m + e] = interval_distance(tree.cell(t.classes[c].prefix(first)),
                                                       tree.cell(t.classes[e].prefix(first)));
        }
    }

    const double approx = std::pow(static_cast<double>(t.m), static_cast<double>(t.w));
    if (approx > static_cast<double>(policy.cap))
        throw std::runtime_error("certify_lipschitz: class tuples exceed the cap of " +
                                 std::to_string(policy.cap));
    t.tuples = 1;
    for (std::size_t s = 0; s < t.w; ++s) t.tuples *= t.m;

    t.tclass.assign(t.tuples * t.w, 0);
    t.beta.assign(t.tuples * t.d, 0);
    t.diam_pref.assign(t.tuples * t.d, 0.0);

    std::vector<std::uint16_t> odo(t.w, 0);
    for (std::uint64_t id = 0; id < t.tuples; ++id) {
        for (std::size_t s = 0; s < t.w; ++s) t.tclass[id * t.w + s] = odo[s];
        Address out = f.prefix();
        for (std::size_t j = 0; j < t.d; ++j) {
            t.diam_pref[id * t.d + j] = tree.cell(out).diam();
            const std::uint32_t window = profile.arity(t.p + j + 1) - 1;
            std::uint32_t parity = 0;
            for (std::uint32_t s = 0; s < window; ++s)
                parity += t.classes[odo[s]].digits[j] % 2;
            const std::uint16_t b = static_cast<std::uint16_t>(1 + parity);
            t.beta[id * t.d + j] = b;
            out.digits.push_back(b);
        }
        // advance odometer
        std::size_t s = t.w;
        while (s > 0) {
            if (odo[s - 1] + 1 < t.m) {
                ++odo[s - 1];
                break;
            }
            odo[s - 1] = 0;
            --s;
        }
    }
    return t;
}

struct PairOutcome {
    double max_ratio = 0.0;
    std::uint64_t pairs = 0;
    std::uint64_t violations = 0;
};

/// Checks one ordered tuple pair; returns the certified ratio bound for it
/// (0 when the outputs agree) and appends a description on violation.
double check_pair(const TransformTables& t, const CellTree& tree, double declared,
                  std::uint64_t lhs, std::uint64_t rhs, bool* violated,
                  std::string* description) {
    std::size_t jd = t.d;
    for (std::size_t j = 0; j < t.d; ++j) {
        if (t.beta[lhs * t.d + j] != t.beta[rhs * t.d + j]) {
            jd = j;
            break;
        }
    }
    if (jd == t.d) return 0.0;  // outputs coincide

    const double num = t.diam_pref[lhs * t.d + jd];
    double denom = 0.0;
    for (std::size_t s = 0; s < t.w; ++s) {
        const std::uint16_t c = t.tclass[lhs * t.w + s];
        const std::uint16_t e = t.tclass[rhs * t.w + s];
        if (c != e) denom = std::max(denom, t.gap[c * t.m + e]);
    }
    const double b_out = tree.diam_bound(t.p + jd + 1 - 1);  // b_{p + eta - 1}, eta = jd+1
    const double b_eta = tree.diam_bound(jd + 1);
    const double ratio = num / denom;
    if (!(num <= b_out) || !(denom > tree.q() * b_eta) || !(ratio <= declared)) {
        *violated = true;
        if (description && description->empty()) {
            *description = "tuple pair #" + std::to_string(lhs) + "/#" + std::to_string(rhs) +
                           ": num=" + fmt(num) + " denom=" + fmt(denom) + " eta=" +
                           std::to_string(jd + 1);
        }
    }
    return ratio;
}

MapCertificate certify_transform(const GifsInfMap& f, const TuplePolicy& policy,
                                 double declared) {
    MapCertificate cert;
    cert.map_name = f.name();
    cert.declared_bound = f.declared_lip();
    if (f.window() == 0) {  // fully prefixed map is constant at desk scale
        cert.pairs_checked = 0;
        return cert;
    }
    const TransformTables t = build_tables(f, policy);
    const CellTree& tree = f.tree();

    std::atomic<std::uint64_t> violations{0};
    const double max_ratio = parallel_max(t.tuples, 0.0, [&](std::size_t lhs) {
        double acc = 0.0;
        bool bad = false;
        for (std::uint64_t rhs = lhs + 1; rhs < t.tuples; ++rhs)
            acc = std::max(acc, check_pair(t, tree, declared, lhs, rhs, &bad, nullptr));
        if (bad) violations.fetch_add(1, std::memory_order_relaxed);
        return acc;
    });
    cert.max_ratio = max_ratio;
    cert.pairs_checked = t.tuples * (t.tuples - 1) / 2;
    if (violations.load() > 0) {
        // deterministic rescan for the first few offending pairs
        for (std::uint64_t lhs = 0; lhs < t.tuples && cert.violations.size() < 5; ++lhs) {
            for (std::uint64_t rhs = lhs + 1; rhs < t.tuples && cert.violations.size() < 5;
                 ++rhs) {
                bool bad = false;
                std::string desc;
                check_pair(t, tree, declared, lhs, rhs, &bad, &desc);
                if (bad) cert.violations.push_back(desc);
            }
        }
    }
    return cert;
}

MapCertificate certify_piecewise(const GifsInfMap& f, const GifsInfSystem& sys,
                                 const TuplePolicy& policy) {
    // Case 1 (both sequences inside l_inf(K)): the base transform bound.
    const double base_lip = std::pow(f.tree().q(), -static_cast<double>(f.prefix().depth()));
    MapCertificate cert = certify_transform(f, policy, base_lip);
    cert.map_name = f.name();
    cert.declared_bound = f.declared_lip();

    // Case 2 (both outside): images coincide at f(anchor, anchor, ...), ratio 0.

    // Case 3 (mixed): numerator bounded by the shared output-prefix cell,
    // denominator by the exact gap dist(K, P).
    const CompactNet k_net = materialize_net(f.tree(), f.tree().depth());
    const double eta_dist = set_distance(k_net, f.extra());
    const double diam_k = diameter(k_net);
    if (f.window() > 0) {
        const TransformTables t = build_tables(f, policy);
        const CellTree& tree = f.tree();
        const Address anchor_class =
            address_of_point(tree, f.anchor()).prefix(f.consumed_depth());
        std::uint64_t anchor_idx = 0;
        for (std::size_t c = 0; c < t.m; ++c)
            if (t.classes[c] == anchor_class) anchor_idx = c;
        std::uint64_t anchor_tuple = 0;
        for (std::size_t s = 0; s < t.w; ++s) anchor_tuple = anchor_tuple * t.m + anchor_idx;

        for (std::uint64_t lhs = 0; lhs < t.tuples; ++lhs) {
            std::size_t jd = t.d;
            for (std::size_t j = 0; j < t.d; ++j) {
                if (t.beta[lhs * t.d + j] != t.beta[anchor_tuple * t.d + j]) {
                    jd = j;
                    break;
                }
            }
            ++cert.pairs_checked;
            if (jd == t.d) continue;
            const double num = t.diam_pref[lhs * t.d + jd];
            const double ratio = num / eta_dist;
            cert.max_ratio = std::max(cert.max_ratio, ratio);
            if (!(num <= base_lip * diam_k * (1.0 + 1e-12)) || !(ratio <= f.declared_lip())) {
                cert.violations.push_back("mixed case, tuple #" + std::to_string(lhs) +
                                          ": num=" + fmt(num) + " eta_dist=" + fmt(eta_dist));
            }
        }
    }
    (void)sys;
    return cert;
}

}  // namespace

bool LipschitzCertificate::pass() const {
    for (const MapCertificate& m : maps)
        if (!m.pass()) return false;
    return true;
}

double LipschitzCertificate::certified_bound() const {
    double b = 0.0;
    for (const MapCertificate& m : maps) b = std::max(b, m.declared_bound);
    return b;
}

LipschitzCertificate certify_lipschitz(const GifsInfSystem& sys, const TuplePolicy& policy) {
    LipschitzCertificate cert;
    for (const GifsInfMap& f : sys.maps()) {
        switch (f.kind()) {
            case GifsInfMap::Kind::AddressTransform:
                cert.maps.push_back(certify_transform(f, policy, f.declared_lip()));
                break;
            case GifsInfMap::Kind::PiecewiseUnion:
                cert.maps.push_back(certify_piecewise(f, sys, policy));
                break;
            case GifsInfMap::Kind::Constant: {
                MapCertificate c;
                c.map_name = f.name();
                c.declared_bound = 0.0;
                c.max_ratio = 0.0;
                cert.maps.push_back(std::move(c));
                break;
            }
        }
    }
    return cert;
}

ImageCharacterization check_image_characterization(const GifsInfMap& f,
                                                   const std::vector<CompactNet>& ks,
                                                   const TuplePolicy& policy) {
    if (f.kind() != GifsInfMap::Kind::AddressTransform)
        throw std::invalid_argument("check_image_characterization: address transformer required");
    const CellTree& tree = f.tree();
    const std::size_t w = f.window();
    const std::size_t d = f.consumed_depth();
    if (ks.size() < w)
        throw std::invalid_argument("check_image_characterization: need " + std::to_string(w) +
                                    " factor sets for the consumption contract");

    std::vector<std::vector<Address>> slots;
    slots.reserve(w);
    for (std::size_t m = 0; m < w; ++m)
        slots.push_back(class_prefixes(tree, ks[m].points(), d));

    ImageCharacterization out;
    // (a) exhaustive over distinct consumed prefixes
    {
        std::set<Address> img = transform_image(f, slots, policy);
        out.brute.assign(img.begin(), img.end());
    }
    // (b) achievable parity-sum vectors; entries shared between digit
    // windows stay coupled through their joint parity profiles
    {
        const ArityProfile& profile = tree.profile();
        const std::size_t p = f.prefix().depth();
        std::set<std::vector<std::uint16_t>> sums;
        sums.insert(std::vector<std::uint16_t>(d, 0));
        for (std::size_t m = 0; m < w; ++m) {
            // parity profile of each class in slot m, masked to the digits
            // whose window includes entry m
            std::set<std::vector<std::uint8_t>> profiles;
            for (const Address& c : slots[m]) {
                std::vector<std::uint8_t> pr(d, 0);
                for (std::size_t j = 0; j < d; ++j)
                    if (m < static_cast<std::size_t>(profile.arity(p + j + 1)) - 1)
                        pr[j] = c.digits[j] % 2;
                profiles.insert(std::move(pr));
            }
            std::set<std::vector<std::uint16_t>> next;
            for (const auto& sum : sums)
                for (const auto& pr : profiles) {
                    std::vector<std::uint16_t> ext = sum;
                    for (std::size_t j = 0; j < d; ++j) ext[j] += pr[j];
                    next.insert(std::move(ext));
                }
            sums = std::move(next);
        }
        std::set<Address> img;
        for (const auto& sum : sums) {
            Address a = f.prefix();
            for (std::size_t j = 0; j < d; ++j) a.digits.push_back(1 + sum[j]);
            img.insert(tree.all_ones_extension(a));
        }
        out.combinatorial.assign(img.begin(), img.end());
    }
    out.equal = out.brute == out.combinatorial;
    return out;
}

C1Check check_c1_boundedness(const GifsInfMap& f, const std::vector<CompactNet>& ks,
                             const TuplePolicy& policy) {
    if (ks.empty()) throw std::invalid_argument("check_c1_boundedness: factor sets required");
    C1Check chk;
    CompactNet all = ks.front();
    for (std::size_t i = 1; i < ks.size(); ++i) all = merge(all, ks[i]);
    chk.bound = f.declared_lip() * diameter(all);

    std::vector<Point> image;
    if (f.kind() == GifsInfMap::Kind::Constant) {
        image.push_back(f.anchor());
    } else {
        // Piecewise maps are supported on factor sets inside K, where they
        // coincide with their base transform.
        const GifsInfMap base = f.kind() == GifsInfMap::Kind::AddressTransform
                                    ? f
                                    : GifsInfMap::address_transform(f.tree_ptr(), f.prefix());
        const ImageCharacterization ic = check_image_characterization(base, ks, policy);
        for (const Address& a : ic.brute) image.push_back(Point::scalar(f.tree().cell(a).lo));
    }
    chk.image_diameter = diameter(CompactNet(std::move(image)));
    chk.ok = chk.image_diameter <= chk.bound + 1e-9;
    return chk;
}

}  // namespace gifslab
