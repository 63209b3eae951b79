#include "gifslab/lipschitz_ext.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gifslab/parallel.hpp"

namespace gifslab {

namespace {

constexpr double kConsistencySlack = 1e-12;
constexpr std::uint64_t kAnchorCap = 1'000'000;

Point embed_scalar(double v, std::size_t dim) {
    std::vector<double> c(dim, 0.0);
    c[0] = v;
    return Point(std::move(c));
}

double point_to_set(const Point& x, const CompactNet& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : set.points()) best = std::min(best, distance(x, p));
    return best;
}

}  // namespace

SampledMap::SampledMap(std::vector<CompactNet> pool, std::vector<Anchor> anchors, double lip,
                       bool validate)
    : pool_(std::move(pool)), anchors_(std::move(anchors)), lip_(lip) {
    if (pool_.empty()) throw std::invalid_argument("SampledMap: empty slot pool");
    if (anchors_.empty()) throw std::invalid_argument("SampledMap: needs anchors");
    if (!(lip_ >= 0.0)) throw std::invalid_argument("SampledMap: bound must be >= 0");
    in_dim_ = pool_.front().dim();
    for (const CompactNet& s : pool_)
        if (s.dim() != in_dim_) throw std::invalid_argument("SampledMap: mixed pool dimensions");
    window_ = anchors_.front().slots.size();
    if (window_ < 1) throw std::invalid_argument("SampledMap: window must be >= 1");
    out_dim_ = anchors_.front().output.dim();
    for (const Anchor& a : anchors_) {
        if (a.slots.size() != window_) throw std::invalid_argument("SampledMap: ragged windows");
        if (a.output.dim() != out_dim_)
            throw std::invalid_argument("SampledMap: mixed output dimensions");
        for (std::uint32_t s : a.slots)
            if (s >= pool_.size()) throw std::invalid_argument("SampledMap: slot index out of range");
    }
    pool_dist_.assign(pool_.size() * pool_.size(), 0.0);
    for (std::size_t i = 0; i < pool_.size(); ++i)
        for (std::size_t j = i + 1; j < pool_.size(); ++j) {
            const double d = set_distance(pool_[i], pool_[j]);
            pool_dist_[i * pool_.size() + j] = d;
            pool_dist_[j * pool_.size() + i] = d;
        }
    if (validate) validate_consistency();
}

SampledMap SampledMap::from_points(const std::vector<std::pair<Point, Point>>& graph, double lip,
                                   bool validate) {
    std::vector<CompactNet> pool;
    std::vector<Anchor> anchors;
    pool.reserve(graph.size());
    anchors.reserve(graph.size());
    for (const auto& [in, out] : graph) {
        pool.emplace_back(std::vector<Point>{in});
        anchors.push_back({{static_cast<std::uint32_t>(pool.size() - 1)}, out});
    }
    return SampledMap(std::move(pool), std::move(anchors), lip, validate);
}

double SampledMap::anchor_distance(std::size_t i, std::size_t j) const {
    const Anchor& a = anchors_[i];
    const Anchor& b = anchors_[j];
    double d = 0.0;
    for (std::size_t s = 0; s < window_; ++s)
        d = std::max(d, pool_dist_[a.slots[s] * pool_.size() + b.slots[s]]);
    return d;
}

double SampledMap::input_distance(const std::vector<Point>& x, std::size_t anchor) const {
    if (x.size() != window_) throw std::invalid_argument("SampledMap: window size mismatch");
    const Anchor& a = anchors_[anchor];
    double d = 0.0;
    for (std::size_t s = 0; s < window_; ++s) d = std::max(d, point_to_set(x[s], pool_[a.slots[s]]));
    return d;
}

void SampledMap::validate_consistency() const {
    double scale = 0.0;
    for (const Anchor& a : anchors_)
        for (double c : a.output.coords()) scale = std::max(scale, std::abs(c));
    const double tol = kConsistencySlack * std::max(scale, 1.0);

    const std::size_t n = anchors_.size();
    std::atomic<bool> bad{false};
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi && !bad.load(std::memory_order_relaxed); ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dout = distance(anchors_[i].output, anchors_[j].output);
                if (dout > lip_ * anchor_distance(i, j) + tol) {
                    bad.store(true, std::memory_order_relaxed);
                    break;
                }
            }
        }
    });
    if (bad.load())
        throw std::invalid_argument("SampledMap: anchors violate the declared Lipschitz bound");
}

double estimate_lipschitz(const SampledMap& f) {
    const std::size_t n = f.anchors().size();
    if (n < 2) throw std::invalid_argument("estimate_lipschitz: needs at least 2 anchors");
    return parallel_max(n, 0.0, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double din = f.anchor_distance(i, j);
            const double dout = distance(f.anchors()[i].output, f.anchors()[j].output);
            if (din == 0.0) {
                if (dout > 0.0) return std::numeric_limits<double>::infinity();
                continue;
            }
            acc = std::max(acc, dout / din);
        }
        return acc;
    });
}

Point mcshane_extend(const SampledMap& f, const std::vector<Point>& x) {
    const std::size_t n = f.anchors().size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = f.input_distance(x, i);
        // the minimum is attained at a distance-zero anchor, whose output the
        // validated consistency pins exactly
        if (d[i] == 0.0) return f.anchors()[i].output;
    }
    std::vector<double> out(f.out_dim());
    for (std::size_t c = 0; c < f.out_dim(); ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            best = std::min(best, f.anchors()[i].output[c] + f.lip() * d[i]);
        out[c] = best;
    }
    return Point(std::move(out));
}

Point mcshane_extend(const SampledMap& f, const Point& x) {
    return mcshane_extend(f, std::vector<Point>{x});
}

ExtendedMap::ExtendedMap(GifsInfMap base, std::size_t dim)
    : base_(std::move(base)),
      dim_(dim),
      ambient_lip_(std::sqrt(static_cast<double>(dim)) * base_.declared_lip()),
      sampled_(
          // anchor table over every consumed digit-prefix class
          [&]() -> SampledMap {
              if (base_.kind() != GifsInfMap::Kind::AddressTransform)
                  throw std::invalid_argument("ExtendedMap: address transformer required");
              const CellTree& tree = base_.tree();
              const ArityProfile& profile = tree.profile();
              const std::size_t d = base_.consumed_depth();
              const std::size_t w = base_.window();
              if (d < 1 || w < 1)
                  throw std::invalid_argument("ExtendedMap: fully prefixed map has no window");
              const std::vector<Address> classes = enumerate_addresses(profile, d);
              const std::size_t m = classes.size();

              std::vector<CompactNet> pool;
              pool.reserve(m);
              for (const Address& c : classes) {
                  std::vector<Point> members;
                  for (const auto& [leaf, iv] : tree.cells_at_depth(tree.depth())) {
                      if (std::equal(c.digits.begin(), c.digits.end(), leaf.digits.begin()))
                          members.push_back(embed_scalar(tree.representative(leaf)[0], dim));
                  }
                  pool.emplace_back(std::move(members));
              }

              const double approx = std::pow(static_cast<double>(m), static_cast<double>(w));
              if (approx > static_cast<double>(kAnchorCap))
                  throw std::runtime_error("ExtendedMap: anchor table exceeds the cap");

              std::vector<SampledMap::Anchor> anchors;
              std::vector<std::uint32_t> odo(w, 0);
              std::vector<const Address*> chosen(w);
              while (true) {
                  Address out = base_.prefix();
                  for (std::size_t j = 1; j + base_.prefix().depth() <= tree.depth(); ++j) {
                      const std::uint32_t win = profile.arity(j + base_.prefix().depth()) - 1;
                      std::uint32_t parity = 0;
                      for (std::uint32_t s = 0; s < win; ++s)
                          parity += classes[odo[s]].digits[j - 1] % 2;
                      out.digits.push_back(1 + parity);
                  }
                  anchors.push_back(
                      {std::vector<std::uint32_t>(odo.begin(), odo.end()),
                       embed_scalar(tree.representative(out)[0], dim)});
                  std::size_t s = w;
                  while (s > 0) {
                      if (odo[s - 1] + 1 < m) {
                          ++odo[s - 1];
                          break;
                      }
                      odo[s - 1] = 0;
                      --s;
                  }
                  if (s == 0) break;
              }
              return SampledMap(std::move(pool), std::move(anchors), base_.declared_lip(), true);
          }()) {
    // evaluation tables
    const CellTree& tree = base_.tree();
    const ArityProfile& profile = tree.profile();
    const std::size_t d = base_.consumed_depth();
    const std::size_t p = base_.prefix().depth();
    const std::vector<Address> classes = enumerate_addresses(profile, d);

    class_parity_.resize(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        class_parity_[c].resize(d);
        for (std::size_t j = 0; j < d; ++j) class_parity_[c][j] = classes[c].digits[j] % 2;
    }
    digit_window_.resize(d);
    state_stride_.resize(d);
    state_count_ = 1;
    for (std::size_t j = 0; j < d; ++j) {
        digit_window_[j] = profile.arity(p + j + 1) - 1;
        state_stride_[j] = static_cast<std::uint32_t>(state_count_);
        state_count_ *= digit_window_[j] + 1;
    }
    state_output_.reserve(state_count_);
    for (std::size_t st = 0; st < state_count_; ++st) {
        Address out = base_.prefix();
        std::size_t rem = st;
        for (std::size_t j = 0; j < d; ++j) {
            const std::uint32_t sigma = rem % (digit_window_[j] + 1);
            rem /= digit_window_[j] + 1;
            out.digits.push_back(1 + sigma);
        }
        state_output_.push_back(embed_scalar(tree.representative(out)[0], dim_));
    }
}

Point ExtendedMap::apply(const std::vector<Point>& window_tuple) const {
    const std::size_t w = window();
    if (window_tuple.size() != w)
        throw std::invalid_argument("ExtendedMap: window tuple size mismatch");
    const std::size_t m = class_parity_.size();
    const std::size_t d = digit_window_.size();

    // distance from each tuple slot to each class's net points
    std::vector<double> dist_table(w * m);
    for (std::size_t s = 0; s < w; ++s)
        for (std::size_t c = 0; c < m; ++c)
            dist_table[s * m + c] = point_to_set(window_tuple[s], sampled_.pool()[c]);

    // exact shortcut: a tuple of net points determines a zero-cost state
    {
        bool all_zero = true;
        std::size_t state = 0;
        for (std::size_t s = 0; s < w && all_zero; ++s) {
            bool found = false;
            for (std::size_t c = 0; c < m; ++c) {
                if (dist_table[s * m + c] == 0.0) {
                    for (std::size_t j = 0; j < d; ++j)
                        if (s < digit_window_[j]) state += class_parity_[c][j] * state_stride_[j];
                    found = true;
                    break;
                }
            }
            all_zero = found;
        }
        if (all_zero) return state_output_[state];
    }

    // min-max DP over slots: cost[state] = least achievable max slot distance
    // among class tuples with that parity-sum profile; grouping anchors by
    // profile leaves the McShane minimum unchanged.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(state_count_, inf), next(state_count_, inf);
    cost[0] = 0.0;
    for (std::size_t s = 0; s < w; ++s) {
        std::fill(next.begin(), next.end(), inf);
        for (std::size_t st = 0; st < state_count_; ++st) {
            if (cost[st] == inf) continue;
            for (std::size_t c = 0; c < m; ++c) {
                std::size_t to = st;
                for (std::size_t j = 0; j < d; ++j)
                    if (s < digit_window_[j]) to += class_parity_[c][j] * state_stride_[j];
                const double v = std::max(cost[st], dist_table[s * m + c]);
                next[to] = std::min(next[to], v);
            }
        }
        cost.swap(next);
    }

    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        double best = inf;
        for (std::size_t st = 0; st < state_count_; ++st) {
            if (cost[st] == inf) continue;
            best = std::min(best, state_output_[st][k] + sampled_.lip() * cost[st]);
        }
        out[k] = best;
    }
    return Point(std::move(out));
}

ExtendedSystem::ExtendedSystem(std::vector<ExtendedMap> maps, std::shared_ptr<const CellTree> tree,
                               std::size_t dim)
    : maps_(std::move(maps)), tree_(std::move(tree)), dim_(dim) {
    if (maps_.empty()) throw std::invalid_argument("ExtendedSystem: needs maps");
    if (!tree_) throw std::invalid_argument("ExtendedSystem: tree required");
    for (const ExtendedMap& m : maps_) {
        if (m.base().tree_ptr() != tree_ || m.dim() != dim_)
            throw std::invalid_argument("ExtendedSystem: maps must share tree and dimension");
        contraction_ = std::max(contraction_, m.ambient_lip());
    }
    if (!(contraction_ < 1.0))
        throw std::invalid_argument("ExtendedSystem: ambient bounds must stay below 1");
}

ExtendedSystem extend_system(std::shared_ptr<const CellTree> tree, std::size_t dim, double r) {
    if (dim < 1) throw std::invalid_argument("extend_system: dim must be >= 1");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("extend_system: r must lie in (0,1)");
    GifsInfSystem base = build_refined_system(tree, r / std::sqrt(static_cast<double>(dim)));
    std::vector<ExtendedMap> maps;
    maps.reserve(base.maps().size());
    for (const GifsInfMap& f : base.maps()) maps.emplace_back(f, dim);
    return ExtendedSystem(std::move(maps), std::move(tree), dim);
}

ExtendedSystem extend_system(const GifsInfSystem& sys, std::size_t dim, double r) {
    return extend_system(sys.tree_ptr(), dim, r);
}

CompactNet hutchinson_step_extended(const ExtendedSystem& sys, const CompactNet& s,
                                    const TuplePolicy& policy) {
    if (s.dim() != sys.dim())
        throw std::invalid_argument("hutchinson_step_extended: dimension mismatch");
    const CellTree& tree = sys.tree();

    const CompactNet net = embed_first_axis(materialize_net(tree, tree.depth()), sys.dim());
    bool on_net = true;
    for (const Point& p : s.points()) {
        if (!net.contains(p)) {
            on_net = false;
            break;
        }
    }

    std::vector<Point> out;
    if (on_net) {
        // The extension agrees with the base transform on net tuples, so the
        // image collapses to the exhaustive digit-class image of the base.
        std::vector<Point> flat;
        flat.reserve(s.size());
        for (const Point& p : s.points()) flat.push_back(Point::scalar(p[0]));
        const CompactNet s1(std::move(flat), s.resolution());
        std::vector<GifsInfMap> base_maps;
        for (const ExtendedMap& m : sys.maps()) base_maps.push_back(m.base());
        const GifsInfSystem base(std::move(base_maps), sys.maps().front().base().tree_ptr());
        const CompactNet img = hutchinson_step_inf(base, s1, policy);
        for (const Point& p : img.points()) {
            std::vector<double> c(sys.dim(), 0.0);
            c[0] = p[0];
            out.emplace_back(std::move(c));
        }
    } else {
        const std::size_t w = sys.maps().front().window();
        const double approx =
            std::pow(static_cast<double>(s.size()), static_cast<double>(w));
        if (approx > static_cast<double>(policy.cap))
            throw std::runtime_error("hutchinson_step_extended: |S|^window exceeds the tuple cap");
        std::vector<std::size_t> idx(w, 0);
        std::vector<Point> tuple(w, s.points().front());
        while (true) {
            for (const ExtendedMap& m : sys.maps()) out.push_back(m.apply(tuple));
            std::size_t j = w;
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
    }
    return CompactNet(std::move(out), sys.contraction() * s.resolution());
}

IterationResult iterate_to_fixed_point(const ExtendedSystem& sys, const CompactNet& s0, double tol,
                                       std::size_t max_iter, const TuplePolicy& policy) {
    return iterate_to_fixed_point(
        [&](const CompactNet& s) { return hutchinson_step_extended(sys, s, policy); },
        sys.contraction(), s0, tol, max_iter);
}

}  // namespace gifslab
