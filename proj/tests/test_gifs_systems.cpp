#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gifslab/gifs_systems.hpp"

using namespace gifslab;

namespace {

IfsSystem cantor_ifs() {
    return IfsSystem({{[](const Point& x) { return Point::scalar(x[0] / 3.0); }, 1.0 / 3.0},
                      {[](const Point& x) { return Point::scalar(x[0] / 3.0 + 2.0 / 3.0); },
                       1.0 / 3.0}});
}

CompactNet net1(std::initializer_list<double> xs) {
    std::vector<Point> pts;
    for (double x : xs) pts.push_back(Point::scalar(x));
    return CompactNet(std::move(pts));
}

std::shared_ptr<const CellTree> shared_tree(double q = 2.0) {
    return std::make_shared<const CellTree>(
        build_balanced_set(q, ArityProfile({2, 2, 8}), {0.0, 1.0}));
}

CompactNet random_subnet(const CompactNet& net, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, net.size() - 1);
    std::uniform_int_distribution<std::size_t> size(1, net.size());
    std::vector<Point> pts;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(net.points()[pick(rng)]);
    return CompactNet(std::move(pts));
}

}  // namespace

TEST_CASE("classical Hutchinson step") {
    const IfsSystem sys = cantor_ifs();
    CHECK(hutchinson_step_ifs(sys, net1({0.0, 1.0})) == net1({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}));
    // two steps from a single point enumerate the compositions
    const CompactNet s2 = hutchinson_step_ifs(sys, hutchinson_step_ifs(sys, net1({0.0})));
    CHECK(s2 == net1({0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0}));
    // a fixed point of one map stays put under that map's singleton system
    const IfsSystem half({{[](const Point& x) { return Point::scalar(x[0] / 2.0); }, 0.5}});
    CHECK(hutchinson_step_ifs(half, net1({0.0})) == net1({0.0}));
}

TEST_CASE("finite-order GIFS step") {
    const GifsSystem avg(
        2, {{[](const std::vector<Point>& xs) { return Point::scalar((xs[0][0] + xs[1][0]) / 4.0); },
             0.5},
            {[](const std::vector<Point>& xs) {
                 return Point::scalar((xs[0][0] + xs[1][0]) / 4.0 + 0.5);
             },
             0.5}});
    CHECK(hutchinson_step_gifs(avg, net1({0.0, 1.0})) == net1({0.0, 0.25, 0.5, 0.75, 1.0}));

    SUBCASE("order 1 reduces to the IFS step") {
        const GifsSystem as_gifs(
            1, {{[](const std::vector<Point>& xs) { return Point::scalar(xs[0][0] / 3.0); },
                 1.0 / 3.0},
                {[](const std::vector<Point>& xs) {
                     return Point::scalar(xs[0][0] / 3.0 + 2.0 / 3.0);
                 },
                 1.0 / 3.0}});
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> coord(0.0, 1.0);
        for (int it = 0; it < 20; ++it) {
            std::vector<Point> pts;
            for (int i = 0; i <= it % 5; ++i) pts.push_back(Point::scalar(coord(rng)));
            const CompactNet s(pts);
            CHECK(hutchinson_step_gifs(as_gifs, s) == hutchinson_step_ifs(cantor_ifs(), s));
        }
    }
    SUBCASE("tuple explosion is refused, never sampled") {
        std::vector<Point> many;
        for (int i = 0; i < 2000; ++i) many.push_back(Point::scalar(i));
        CHECK_THROWS_AS(hutchinson_step_gifs(avg, CompactNet(many), TuplePolicy{1000}),
                        std::runtime_error);
    }
}

TEST_CASE("witness system basics") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    CHECK(sys.maps().size() == 2);
    for (const GifsInfMap& f : sys.maps()) {
        CHECK(f.declared_lip() == 0.5);  // Lip <= 1/q with q = 2
        CHECK(f.window() == 7);
        CHECK(f.consumed_depth() == 2);
    }

    SUBCASE("self-similarity: one step fixes the leaf net exactly") {
        const CompactNet net = materialize_net(*tree, 3);
        CHECK(hutchinson_step_inf(sys, net) == net);
    }
    SUBCASE("single-point step produces at most one point per map") {
        const CompactNet one({tree->representative(Address{{1, 1, 1}})});
        CHECK(hutchinson_step_inf(sys, one).size() <= sys.maps().size());
    }
}

TEST_CASE("applying witness maps to sequences") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    const GifsInfMap& f1 = sys.maps().front();

    SUBCASE("even digits everywhere zero the parity sums") {
        const BoundedSeq s({tree->representative(Address{{2, 2, 2}})});
        CHECK(apply_inf_map(f1, s) == tree->representative(Address{{1, 1, 1}}));
    }
    SUBCASE("an odd first digit in entry 1 flips beta_1") {
        std::vector<Point> entries(7, tree->representative(Address{{2, 2, 2}}));
        entries[0] = tree->representative(Address{{1, 2, 2}});
        const Point out = apply_inf_map(f1, BoundedSeq(entries));
        const Address got = address_of_point(*tree, out);
        CHECK(got.digits[0] == 1);
        CHECK(got.digits[1] == 2);
    }
    SUBCASE("output address equals the digit transform of the input addresses") {
        const ArityProfile& profile = tree->profile();
        for (const Address& c1 : enumerate_addresses(profile, 2)) {
            for (const Address& c2 : enumerate_addresses(profile, 2)) {
                std::vector<Point> entries(7, tree->representative(c2));
                entries[0] = tree->representative(c1);
                std::vector<Address> inputs(7, c2);
                inputs[0] = c1;
                const Address expect = digit_transform(1, inputs, profile, 3);
                CHECK(apply_inf_map(f1, BoundedSeq(entries)) == tree->representative(expect));
            }
        }
    }
    SUBCASE("entries outside the set are rejected") {
        CHECK_THROWS_AS(apply_inf_map(f1, BoundedSeq({Point::scalar(0.5)})), std::domain_error);
    }
}

TEST_CASE("refined systems") {
    auto tree = shared_tree();
    SUBCASE("r = 0.3 needs p = 2") {
        const GifsInfSystem sys = build_refined_system(tree, 0.3);
        CHECK(sys.maps().size() == 4);
        CHECK(sys.contraction() == 0.25);
        const CompactNet net = materialize_net(*tree, 3);
        CHECK(hutchinson_step_inf(sys, net) == net);
    }
    SUBCASE("r = 0.6 reduces to the witness system") {
        const GifsInfSystem sys = build_refined_system(tree, 0.6);
        CHECK(sys.maps().size() == 2);
        CHECK(sys.contraction() == 0.5);
    }
    SUBCASE("unreachable r is rejected") {
        CHECK_THROWS_AS(build_refined_system(tree, 0.05), std::invalid_argument);
        CHECK_THROWS_AS(build_refined_system(tree, 1.5), std::invalid_argument);
    }
}

TEST_CASE("union systems") {
    auto tree = shared_tree();
    const CompactNet p = net1({5.0});
    const GifsInfSystem sys = build_union_system(tree, p, 0.3);
    CHECK(sys.maps().size() == 4 + 1);  // refined count + |P|
    for (const GifsInfMap& f : sys.maps()) {
        if (f.kind() == GifsInfMap::Kind::Constant)
            CHECK(f.declared_lip() == 0.0);
        else
            CHECK(f.declared_lip() <= 0.3);
    }
    SUBCASE("one step reproduces R = K u P exactly") {
        const CompactNet r = merge(materialize_net(*tree, 3), p);
        CHECK(hutchinson_step_inf(sys, r) == r);
    }
    SUBCASE("P inside K is rejected") {
        const CompactNet bad({tree->representative(Address{{1, 1, 1}})});
        CHECK_THROWS_AS(build_union_system(tree, bad, 0.3), std::invalid_argument);
    }
    SUBCASE("mixed sequences fall back to the anchor value") {
        const GifsInfMap& f = sys.maps().front();
        std::vector<Point> entries(7, tree->representative(Address{{1, 1, 1}}));
        entries[3] = Point::scalar(5.0);
        const Point via_anchor = apply_inf_map(
            f, BoundedSeq(std::vector<Point>(7, f.anchor())));
        CHECK(apply_inf_map(f, BoundedSeq(entries)) == via_anchor);
    }
}

TEST_CASE("fixed point iteration") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    const CompactNet net = materialize_net(*tree, 3);
    const double b3 = tree->diam_bound(3);

    SUBCASE("from a single point to the attractor net") {
        const CompactNet s0({tree->representative(Address{{2, 1, 3}})});
        const IterationResult res = iterate_to_fixed_point(sys, s0, b3, 64);
        CHECK(res.converged);
        CHECK(hausdorff_distance(res.net, net) <= b3);
        CHECK(geometric_domination(res.trace, 0.5, 1e-9));
    }
    SUBCASE("starting at the attractor stops immediately") {
        const IterationResult res = iterate_to_fixed_point(sys, net, b3, 8);
        CHECK(res.converged);
        CHECK(res.steps == 1);
        CHECK(res.trace.front() == 0.0);
    }
    SUBCASE("uniqueness shadow: different starts land together") {
        const double tol = b3 / 4.0;
        const IterationResult a =
            iterate_to_fixed_point(sys, CompactNet({tree->representative(Address{{1, 2, 5}})}),
                                   tol, 64);
        const IterationResult b =
            iterate_to_fixed_point(sys, CompactNet({tree->representative(Address{{2, 2, 8}})}),
                                   tol, 64);
        CHECK(hausdorff_distance(a.net, b.net) <= 2.0 * tol);
    }
    SUBCASE("max_iter exhaustion is flagged") {
        const CompactNet s0({tree->representative(Address{{2, 1, 3}})});
        const IterationResult res = iterate_to_fixed_point(sys, s0, 1e-12, 1);
        CHECK_FALSE(res.converged);
    }
    SUBCASE("cantor baseline contraction estimate") {
        const IfsSystem cantor = cantor_ifs();
        CompactNet s = net1({0.0, 0.5, 1.0});
        std::vector<double> trace;
        for (int m = 0; m < 8; ++m) {
            const CompactNet next = hutchinson_step_ifs(cantor, s);
            trace.push_back(hausdorff_distance(s, next));
            s = next;
        }
        CHECK(geometric_domination(trace, 1.0 / 3.0, 1e-9));
    }
}

TEST_CASE("hutchinson contraction in the Hausdorff metric") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    const CompactNet net = materialize_net(*tree, 3);
    std::mt19937_64 rng(13);
    for (int it = 0; it < 40; ++it) {
        const CompactNet a = random_subnet(net, rng);
        const CompactNet b = random_subnet(net, rng);
        const double lhs = hausdorff_distance(hutchinson_step_inf(sys, a),
                                              hutchinson_step_inf(sys, b));
        CHECK(lhs <= sys.contraction() * hausdorff_distance(a, b) + 1e-9);
    }
}

TEST_CASE("lipschitz certificates") {
    auto tree = shared_tree();
    SUBCASE("witness: certified bound 1/q with zero violations") {
        const LipschitzCertificate cert = certify_lipschitz(build_witness_system(tree));
        CHECK(cert.pass());
        CHECK(cert.certified_bound() == 0.5);
        for (const MapCertificate& m : cert.maps) {
            CHECK(m.max_ratio <= 0.5);
            CHECK(m.pairs_checked > 0);
            CHECK(m.violations.empty());
        }
    }
    SUBCASE("refined p = 2: certified bound q^-2") {
        const LipschitzCertificate cert = certify_lipschitz(build_refined_system(tree, 0.3));
        CHECK(cert.pass());
        CHECK(cert.certified_bound() == 0.25);
        for (const MapCertificate& m : cert.maps) CHECK(m.max_ratio <= 0.25);
    }
    SUBCASE("union system including constants") {
        const LipschitzCertificate cert =
            certify_lipschitz(build_union_system(tree, net1({5.0}), 0.3));
        CHECK(cert.pass());
        for (const MapCertificate& m : cert.maps) {
            if (m.map_name == "h[const]") CHECK(m.declared_bound == 0.0);
            CHECK(m.max_ratio <= m.declared_bound + 1e-15);
        }
    }
    SUBCASE("cap exhaustion is an error") {
        CHECK_THROWS_AS(certify_lipschitz(build_witness_system(tree), TuplePolicy{100}),
                        std::runtime_error);
    }
}

TEST_CASE("image characterization matches brute force") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    const GifsInfMap& f1 = sys.maps().front();
    const CompactNet net = materialize_net(*tree, 3);

    SUBCASE("full net gives the full cylinder") {
        const std::vector<CompactNet> ks(7, net);
        const ImageCharacterization ic = check_image_characterization(f1, ks);
        CHECK(ic.equal);
        CHECK(ic.brute.size() == 16);  // {1} x all beta values: 2 * 8
        for (const Address& a : ic.brute) CHECK(a.digits[0] == 1);
    }
    SUBCASE("singleton factors give a singleton image") {
        const std::vector<CompactNet> ks(7,
                                         CompactNet({tree->representative(Address{{2, 1, 4}})}));
        const ImageCharacterization ic = check_image_characterization(f1, ks);
        CHECK(ic.equal);
        CHECK(ic.brute.size() == 1);
    }
    SUBCASE("randomized subset configurations") {
        std::mt19937_64 rng(17);
        for (int it = 0; it < 25; ++it) {
            std::vector<CompactNet> ks;
            for (int m = 0; m < 7; ++m) ks.push_back(random_subnet(net, rng));
            const ImageCharacterization ic = check_image_characterization(f1, ks);
            CHECK(ic.equal);
        }
    }
    SUBCASE("too few factor sets violate the contract") {
        const std::vector<CompactNet> ks(3, net);
        CHECK_THROWS_AS(check_image_characterization(f1, ks), std::invalid_argument);
    }
}

TEST_CASE("boundedness shadow of (C1)") {
    auto tree = shared_tree();
    const GifsInfSystem sys = build_witness_system(tree);
    const CompactNet net = materialize_net(*tree, 3);

    SUBCASE("singleton inputs have image diameter zero") {
        const std::vector<CompactNet> ks(7,
                                         CompactNet({tree->representative(Address{{1, 1, 1}})}));
        const C1Check chk = check_c1_boundedness(sys.maps().front(), ks);
        CHECK(chk.ok);
        CHECK(chk.image_diameter == 0.0);
    }
    SUBCASE("full net inputs respect Lip(f) * diam") {
        const std::vector<CompactNet> ks(7, net);
        const C1Check chk = check_c1_boundedness(sys.maps().front(), ks);
        CHECK(chk.ok);
        CHECK(chk.image_diameter <= 0.5 * diameter(net) + 1e-9);
    }
}
