#include "gifslab/balanced_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gifslab {

namespace {

constexpr double kGapMargin = 0.10;   // strict inequalities get a 10% cushion
constexpr double kPadFrac = 0.02;     // containment slack inside each parent
constexpr double kDiamSlack = 1.01;   // declared b_n = 1.01 * actual cell width

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

double interval_distance(const Interval& a, const Interval& b) {
    return std::max(0.0, std::max(b.lo - a.hi, a.lo - b.hi));
}

CellTree::CellTree(double q, ArityProfile profile, Interval ambient,
                   std::vector<double> diam_bounds, IndexingFunction phi,
                   std::map<Address, Interval> cells)
    : q_(q),
      profile_(std::move(profile)),
      ambient_(ambient),
      diam_bounds_(std::move(diam_bounds)),
      phi_(std::move(phi)),
      cells_(std::move(cells)) {
    if (!(q_ >= 2.0)) throw std::invalid_argument("CellTree: q must be >= 2");
    if (!(ambient_.diam() > 0.0)) throw std::invalid_argument("CellTree: empty ambient interval");
    if (diam_bounds_.size() != profile_.depth())
        throw std::invalid_argument("CellTree: need one diameter bound per depth");
    for (double b : diam_bounds_)
        if (!(b > 0.0)) throw std::invalid_argument("CellTree: diameter bounds must be positive");
    std::uint64_t expected = 0;
    for (std::size_t k = 1; k <= profile_.depth(); ++k) expected += profile_.count_at(k);
    if (cells_.size() != expected)
        throw std::invalid_argument("CellTree: expected " + std::to_string(expected) +
                                    " cells, got " + std::to_string(cells_.size()));
    for (const auto& [addr, iv] : cells_) {
        if (!profile_.admits(addr))
            throw std::invalid_argument("CellTree: address " + addr.str() + " not admissible");
        if (!(iv.lo <= iv.hi))
            throw std::invalid_argument("CellTree: cell " + addr.str() + " is empty");
        if (addr.depth() == profile_.depth()) leaf_index_.emplace_back(iv, addr);
    }
    std::sort(leaf_index_.begin(), leaf_index_.end(),
              [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
}

const Address* CellTree::leaf_containing(double x) const {
    auto it = std::upper_bound(leaf_index_.begin(), leaf_index_.end(), x,
                               [](double v, const auto& leaf) { return v < leaf.first.lo; });
    if (it == leaf_index_.begin()) return nullptr;
    --it;
    return it->first.contains(x) ? &it->second : nullptr;
}

double CellTree::diam_bound(std::size_t n) const {
    if (n < 1 || n > diam_bounds_.size()) throw std::out_of_range("CellTree: depth out of range");
    return diam_bounds_[n - 1];
}

const Interval& CellTree::cell(const Address& a) const {
    auto it = cells_.find(a);
    if (it == cells_.end()) throw std::out_of_range("CellTree: no cell " + a.str());
    return it->second;
}

std::vector<std::pair<Address, Interval>> CellTree::cells_at_depth(std::size_t n) const {
    std::vector<std::pair<Address, Interval>> out;
    for (const auto& [addr, iv] : cells_) {
        if (addr.depth() == n) out.emplace_back(addr, iv);
        if (addr.depth() > n) break;  // map order is length-then-lex
    }
    return out;
}

Address CellTree::all_ones_extension(const Address& prefix) const {
    Address a = prefix;
    while (a.depth() < depth()) a.digits.push_back(1);
    return a;
}

Point CellTree::representative(const Address& prefix) const {
    return Point::scalar(cell(all_ones_extension(prefix)).lo);
}

CellTree build_balanced_set(double q, const ArityProfile& profile, Interval ambient) {
    if (!(q >= 2.0)) throw std::invalid_argument("build_balanced_set: q must be >= 2");
    if (!(ambient.diam() > 0.0))
        throw std::invalid_argument("build_balanced_set: ambient interval is empty");

    const std::size_t N = profile.depth();
    IndexingFunction phi = build_indexing_function(profile);

    std::map<Address, Interval> cells;
    std::vector<double> widths(N, 0.0);

    // Per level: current parents (address -> interval). Level 0 is the ambient.
    std::vector<std::pair<Address, Interval>> parents = {{Address{}, ambient}};

    for (std::size_t n = 0; n < N; ++n) {
        const std::uint32_t a = profile.arity(n + 1);
        const double parent_width = parents.front().second.diam();
        const double usable = parent_width * (1.0 - kPadFrac);

        // Cluster span factor: span_c = w * (a + (a-1) q (1+m)).
        const double cluster_factor =
            a + (a - 1) * q * (1.0 + kGapMargin);
        // Spread gap: q-separation cushion, or (odd level) above the cluster span.
        const bool odd_rule = (n >= 1) && (n % 2 == 1);
        const double spread_gap_factor =
            odd_rule ? (1.0 + kGapMargin) * cluster_factor : q * (1.0 + kGapMargin);
        const double denom = a + (a - 1) * spread_gap_factor;

        const double w = usable / denom;
        if (!(w > 1e-300) || !std::isfinite(w))
            throw std::runtime_error(
                "build_balanced_set: infeasible geometry at level " + std::to_string(n + 1) +
                " (cannot place " + std::to_string(a) + " children with required gaps)");
        widths[n] = w;

        const double spread_gap = w * spread_gap_factor;
        const double cluster_gap = w * q * (1.0 + kGapMargin);
        const Address* phi_n = odd_rule ? &phi.at(n) : nullptr;

        std::vector<std::pair<Address, Interval>> next;
        next.reserve(parents.size() * a);
        for (const auto& [paddr, piv] : parents) {
            bool spread = true;
            if (odd_rule) {
                // inside C_{Phi(n)} iff Phi(n) is a prefix of the parent address
                spread = paddr.depth() >= phi_n->depth() &&
                         std::equal(phi_n->digits.begin(), phi_n->digits.end(),
                                    paddr.digits.begin());
            }
            const double gap = spread ? spread_gap : cluster_gap;
            const double span = a * w + (a - 1) * gap;
            const double start =
                spread ? piv.lo + (piv.diam() - span) / 2.0 : piv.lo + piv.diam() * kPadFrac / 2.0;
            for (std::uint32_t i = 0; i < a; ++i) {
                const double lo = start + i * (w + gap);
                Interval child{lo, lo + w};
                Address caddr = paddr.child(i + 1);
                cells.emplace(caddr, child);
                next.emplace_back(std::move(caddr), child);
            }
        }
        parents = std::move(next);
    }

    std::vector<double> b(N);
    for (std::size_t n = 0; n < N; ++n) b[n] = widths[n] * kDiamSlack;
    return CellTree(q, profile, ambient, std::move(b), std::move(phi), std::move(cells));
}

VerifyReport verify_conditions(const CellTree& tree) {
    VerifyReport rep;
    const ArityProfile& profile = tree.profile();
    const std::size_t N = tree.depth();
    rep.strict_threshold = 1e-12 * tree.ambient().diam();

    // (i) arity growth: a_1 >= 2 and a_{n+1} >= n a_1...a_n (integers, exact).
    {
        double worst = static_cast<double>(profile.arity(1)) - 2.0;
        std::string detail = "a_1 - 2 = " + fmt(worst);
        double product = profile.arity(1);
        for (std::size_t n = 1; n < N; ++n) {
            const double slack =
                static_cast<double>(profile.arity(n + 1)) - static_cast<double>(n) * product;
            if (slack < worst) {
                worst = slack;
                detail = "a_" + std::to_string(n + 1) + " - " + std::to_string(n) +
                         "*prod = " + fmt(slack);
            }
            product *= profile.arity(n + 1);
        }
        rep.growth = {worst >= 0.0, worst, detail};
    }

    // (ii) nesting: every child interval inside its parent.
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string detail = "no nested cells";
        for (const auto& [addr, iv] : tree.cells()) {
            if (addr.depth() < 2) continue;
            const Interval& parent = tree.cell(addr.prefix(addr.depth() - 1));
            const double slack = std::min(iv.lo - parent.lo, parent.hi - iv.hi);
            if (slack < worst) {
                worst = slack;
                detail = "cell " + addr.str() + " slack " + fmt(slack);
            }
        }
        if (!std::isfinite(worst)) worst = 0.0;
        rep.nesting = {worst >= 0.0, worst, detail};
    }

    // (iii) diameters: diam(C) <= b_n.
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string detail;
        for (const auto& [addr, iv] : tree.cells()) {
            const double slack = tree.diam_bound(addr.depth()) - iv.diam();
            if (slack < worst) {
                worst = slack;
                detail = "cell " + addr.str() + ": b_n - diam = " + fmt(slack);
            }
        }
        rep.diameter = {worst >= 0.0, worst, detail};
    }

    // (iv) separation: dist between distinct depth-n cells > q b_n (strict).
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string detail;
        for (std::size_t n = 1; n <= N; ++n) {
            const auto level = tree.cells_at_depth(n);
            const double qb = tree.q() * tree.diam_bound(n);
            for (std::size_t i = 0; i < level.size(); ++i) {
                for (std::size_t j = i + 1; j < level.size(); ++j) {
                    const double slack =
                        interval_distance(level[i].second, level[j].second) - qb;
                    if (slack < worst) {
                        worst = slack;
                        detail = level[i].first.str() + " vs " + level[j].first.str() +
                                 ": dist - q*b_n = " + fmt(slack);
                    }
                }
            }
        }
        rep.separation = {worst > rep.strict_threshold, worst, detail};
    }

    // (v) odd levels: sibling gaps under cells inside C_{Phi(n)} exceed the
    // children-union diameter of every cell outside C_{Phi(n)} (strict).
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string detail = "vacuous (no odd level with children)";
        for (std::size_t n = 1; n + 1 <= N; n += 2) {
            const Address& phi_n = tree.phi().at(n);
            double min_inside_gap = std::numeric_limits<double>::infinity();
            double max_outside_span = -std::numeric_limits<double>::infinity();
            std::string inside_witness, outside_witness;
            for (const auto& [addr, iv] : tree.cells_at_depth(n)) {
                const bool inside = addr.depth() >= phi_n.depth() &&
                                    std::equal(phi_n.digits.begin(), phi_n.digits.end(),
                                               addr.digits.begin());
                const std::uint32_t a = profile.arity(n + 1);
                if (inside) {
                    for (std::uint32_t s = 1; s <= a; ++s) {
                        for (std::uint32_t t = s + 1; t <= a; ++t) {
                            const double d = interval_distance(tree.cell(addr.child(s)),
                                                               tree.cell(addr.child(t)));
                            if (d < min_inside_gap) {
                                min_inside_gap = d;
                                inside_witness = addr.str() + " children " + std::to_string(s) +
                                                 "," + std::to_string(t);
                            }
                        }
                    }
                } else {
                    double lo = std::numeric_limits<double>::infinity();
                    double hi = -lo;
                    for (std::uint32_t s = 1; s <= a; ++s) {
                        const Interval& c = tree.cell(addr.child(s));
                        lo = std::min(lo, c.lo);
                        hi = std::max(hi, c.hi);
                    }
                    if (hi - lo > max_outside_span) {
                        max_outside_span = hi - lo;
                        outside_witness = addr.str();
                    }
                }
            }
            if (!std::isfinite(min_inside_gap) || max_outside_span < 0.0) continue;  // vacuous
            const double slack = min_inside_gap - max_outside_span;
            if (slack < worst) {
                worst = slack;
                detail = "level " + std::to_string(n) + ": gap(" + inside_witness + ") - span(" +
                         outside_witness + ") = " + fmt(slack);
            }
        }
        if (!std::isfinite(worst)) {
            rep.odd_level = {true, std::numeric_limits<double>::infinity(), detail};
        } else {
            rep.odd_level = {worst > rep.strict_threshold, worst, detail};
        }
    }

    return rep;
}

CompactNet materialize_net(const CellTree& tree, std::size_t depth) {
    if (depth < 1 || depth > tree.depth())
        throw std::out_of_range("materialize_net: depth out of range");
    std::vector<Point> pts;
    pts.reserve(tree.profile().count_at(depth));
    for (const auto& [addr, iv] : tree.cells_at_depth(depth)) pts.push_back(tree.representative(addr));
    return CompactNet(std::move(pts), tree.diam_bound(depth));
}

Address address_of_point(const CellTree& tree, const Point& x) {
    for (std::size_t i = 1; i < x.dim(); ++i) {
        if (x[i] != 0.0)
            throw std::domain_error("address_of_point: point is off the embedding axis");
    }
    if (const Address* leaf = tree.leaf_containing(x[0])) return *leaf;
    throw std::domain_error("address_of_point: point " + fmt(x[0]) + " is not in the set");
}

}  // namespace gifslab
