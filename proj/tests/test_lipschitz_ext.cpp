#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gifslab/lipschitz_ext.hpp"

using namespace gifslab;

namespace {

std::shared_ptr<const CellTree> shared_tree(std::vector<std::uint32_t> arities = {2, 2, 8}) {
    return std::make_shared<const CellTree>(
        build_balanced_set(2.0, ArityProfile(std::move(arities)), {0.0, 1.0}));
}

SampledMap identity_on(std::initializer_list<double> xs, double lip) {
    std::vector<std::pair<Point, Point>> graph;
    for (double x : xs) graph.emplace_back(Point::scalar(x), Point::scalar(x));
    return SampledMap::from_points(graph, lip);
}

Point random_point(std::mt19937_64& rng, std::size_t dim, double lo = -0.5, double hi = 1.5) {
    std::uniform_real_distribution<double> coord(lo, hi);
    std::vector<double> c(dim);
    for (double& v : c) v = coord(rng);
    return Point(std::move(c));
}

}  // namespace

TEST_CASE("lipschitz estimation on samples") {
    CHECK(estimate_lipschitz(identity_on({0.0, 1.0}, 1.0)) == 1.0);
    const SampledMap halved = SampledMap::from_points(
        {{Point::scalar(0.0), Point::scalar(0.0)}, {Point::scalar(2.0), Point::scalar(1.0)}}, 0.5);
    CHECK(estimate_lipschitz(halved) == 0.5);
    CHECK_THROWS_AS(estimate_lipschitz(identity_on({0.0}, 1.0)), std::invalid_argument);
    // a repeated input with two outputs is flagged as infinite
    const SampledMap conflicted = SampledMap::from_points(
        {{Point::scalar(0.0), Point::scalar(0.0)}, {Point::scalar(0.0), Point::scalar(1.0)}}, 1.0,
        false);
    CHECK(std::isinf(estimate_lipschitz(conflicted)));
}

TEST_CASE("anchor consistency is enforced") {
    CHECK_THROWS_AS(SampledMap::from_points({{Point::scalar(0.0), Point::scalar(0.0)},
                                             {Point::scalar(1.0), Point::scalar(5.0)}},
                                            1.0),
                    std::invalid_argument);
}

TEST_CASE("mcshane extension pointwise") {
    const SampledMap f = identity_on({0.0, 1.0}, 1.0);
    // min(0 + 1*0.5, 1 + 1*0.5) = 0.5
    CHECK(mcshane_extend(f, Point::scalar(0.5)) == Point::scalar(0.5));
    // exact agreement at anchors
    CHECK(mcshane_extend(f, Point::scalar(0.0)) == Point::scalar(0.0));
    CHECK(mcshane_extend(f, Point::scalar(1.0)) == Point::scalar(1.0));
    // outside the hull the min form keeps the constant
    CHECK(mcshane_extend(f, Point::scalar(2.0)) == Point::scalar(2.0));
}

TEST_CASE("per-coordinate bound is L, vector bound sqrt(n) L") {
    // map R -> R^2 sampled on a grid, L = 1 per coordinate
    std::vector<std::pair<Point, Point>> graph;
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        graph.emplace_back(Point::scalar(t), Point({t, 1.0 - t}));
    }
    const SampledMap f = SampledMap::from_points(graph, 1.0);
    std::mt19937_64 rng(23);
    double worst_vec = 0.0, worst_coord = 0.0;
    for (int it = 0; it < 2000; ++it) {
        const Point x = random_point(rng, 1), y = random_point(rng, 1);
        const double din = distance(x, y);
        if (din == 0.0) continue;
        const Point fx = mcshane_extend(f, x), fy = mcshane_extend(f, y);
        worst_vec = std::max(worst_vec, distance(fx, fy) / din);
        for (std::size_t c = 0; c < 2; ++c)
            worst_coord = std::max(worst_coord, std::abs(fx[c] - fy[c]) / din);
    }
    CHECK(worst_coord <= 1.0 + 1e-9);               // exactly L per coordinate
    CHECK(worst_vec <= std::sqrt(2.0) * 1.0 + 1e-9);  // Corollary factor
}

TEST_CASE("system extension in dimension 1") {
    auto tree = shared_tree();
    const ExtendedSystem sys = extend_system(tree, 1, 0.6);
    CHECK(sys.maps().size() == 2);  // p = 1 suffices: 0.5 <= 0.6
    CHECK(sys.contraction() == doctest::Approx(0.5));

    const CompactNet net = materialize_net(*tree, 3);
    SUBCASE("agreement with the base map on net tuples, bitwise") {
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<std::size_t> pick(0, net.size() - 1);
        const GifsInfMap& base = sys.maps().front().base();
        for (int it = 0; it < 50; ++it) {
            std::vector<Point> tuple;
            for (std::size_t s = 0; s < sys.maps().front().window(); ++s)
                tuple.push_back(net.points()[pick(rng)]);
            const Point expect = apply_inf_map(base, BoundedSeq(tuple));
            CHECK(sys.maps().front().apply(tuple) == expect);
        }
    }
    SUBCASE("one step fixes the net exactly") {
        CHECK(hutchinson_step_extended(sys, net) == net);
    }
}

TEST_CASE("system extension in dimension 2") {
    auto tree = shared_tree();
    // 0.5/sqrt(2) = 0.3536 forces p = 2
    const ExtendedSystem sys = extend_system(tree, 2, 0.5);
    CHECK(sys.maps().size() == 4);
    CHECK(sys.maps().front().base_lip() == 0.25);
    CHECK(sys.contraction() == doctest::Approx(0.25 * std::sqrt(2.0)));
    CHECK(sys.contraction() <= 0.5 + 1e-9);

    const CompactNet net = embed_first_axis(materialize_net(*tree, 3), 2);
    SUBCASE("one step fixes the embedded net exactly") {
        CHECK(hutchinson_step_extended(sys, net) == net);
    }
    SUBCASE("sampled ambient ratio respects sqrt(n) * L") {
        std::mt19937_64 rng(37);
        const ExtendedMap& f = sys.maps().front();
        const double bound = std::sqrt(2.0) * f.base_lip();
        double worst = 0.0;
        for (int it = 0; it < 2000; ++it) {
            std::vector<Point> x, y;
            for (std::size_t s = 0; s < f.window(); ++s) {
                x.push_back(random_point(rng, 2));
                y.push_back(random_point(rng, 2));
            }
            double din = 0.0;
            for (std::size_t s = 0; s < f.window(); ++s) din = std::max(din, distance(x[s], y[s]));
            if (din == 0.0) continue;
            worst = std::max(worst, distance(f.apply(x), f.apply(y)) / din);
        }
        CHECK(worst <= bound + 1e-9);
    }
    SUBCASE("grouped evaluation equals the plain anchor minimum") {
        std::mt19937_64 rng(41);
        const ExtendedMap& f = sys.maps().front();
        for (int it = 0; it < 100; ++it) {
            std::vector<Point> x;
            for (std::size_t s = 0; s < f.window(); ++s) x.push_back(random_point(rng, 2));
            const Point got = f.apply(x);
            // naive McShane straight over the anchor table
            std::vector<double> expect(2, std::numeric_limits<double>::infinity());
            bool exact = false;
            for (std::size_t i = 0; i < f.sampled().anchors().size() && !exact; ++i) {
                const double d = f.sampled().input_distance(x, i);
                if (d == 0.0) {
                    expect = f.sampled().anchors()[i].output.coords();
                    exact = true;
                    break;
                }
                for (std::size_t c = 0; c < 2; ++c)
                    expect[c] = std::min(expect[c],
                                         f.sampled().anchors()[i].output[c] + f.base_lip() * d);
            }
            CHECK(got == Point(expect));
        }
    }
}

TEST_CASE("extended iteration from box corners") {
    // window-1 tree keeps the ambient tuple space linear in |S|
    auto tree = shared_tree({2, 2});
    const ExtendedSystem sys = extend_system(tree, 1, 0.6);
    CHECK(sys.maps().front().window() == 1);
    const CompactNet net = materialize_net(*tree, 2);
    const double tol = tree->diam_bound(2);
    const IterationResult res =
        iterate_to_fixed_point(sys, CompactNet({Point::scalar(0.0), Point::scalar(1.0)}), tol, 40);
    CHECK(res.converged);
    CHECK(hausdorff_distance(res.net, net) <= tree->diam_bound(2) + tol);
    CHECK(geometric_domination(res.trace, sys.contraction(), 1e-9));
}

TEST_CASE("extension requires an achievable base bound") {
    auto tree = shared_tree();
    // q^-p <= r/sqrt(n) unreachable within depth 3
    CHECK_THROWS_AS(extend_system(tree, 2, 0.05), std::invalid_argument);
}
