#include <doctest.h>

#include <map>

#include "gifslab/balanced_builder.hpp"

using namespace gifslab;

namespace {

CellTree hand_tree_depth1() {
    // the two-cell layout with b_1 = 0.2: dist = 0.6 > q b_1 = 0.4
    const ArityProfile profile({2});
    std::map<Address, Interval> cells = {{Address{{1}}, {0.0, 0.2}}, {Address{{2}}, {0.8, 1.0}}};
    return CellTree(2.0, profile, {0.0, 1.0}, {0.2}, build_indexing_function(profile),
                    std::move(cells));
}

CellTree hand_tree_depth2() {
    // spread children under C_1, clustered children under C_2
    const ArityProfile profile({2, 2});
    std::map<Address, Interval> cells = {
        {Address{{1}}, {0.0, 0.2}},     {Address{{2}}, {0.8, 1.0}},
        {Address{{1, 1}}, {0.0, 0.01}}, {Address{{1, 2}}, {0.19, 0.2}},
        {Address{{2, 1}}, {0.8, 0.81}}, {Address{{2, 2}}, {0.85, 0.86}}};
    return CellTree(2.0, profile, {0.0, 1.0}, {0.2, 0.01}, build_indexing_function(profile),
                    std::move(cells));
}

}  // namespace

TEST_CASE("hand-built layouts verify") {
    SUBCASE("depth 1") {
        const VerifyReport rep = verify_conditions(hand_tree_depth1());
        CHECK(rep.separation.pass);
        CHECK(rep.separation.margin == doctest::Approx(0.6 - 0.4));
        CHECK(rep.all_pass());
    }
    SUBCASE("depth 2 with the odd-level rule") {
        const VerifyReport rep = verify_conditions(hand_tree_depth2());
        CHECK(rep.all_pass());
        // inside gap 0.18 vs outside children-union span 0.06
        CHECK(rep.odd_level.margin == doctest::Approx(0.18 - 0.06));
        CHECK(rep.separation.margin == doctest::Approx(0.04 - 0.02));
    }
}

TEST_CASE("boundary and broken layouts fail the right condition") {
    const ArityProfile profile({2});
    SUBCASE("distance exactly q b_1 breaks strict separation") {
        std::map<Address, Interval> cells = {{Address{{1}}, {0.0, 0.2}},
                                             {Address{{2}}, {0.6, 0.8}}};
        CellTree tree(2.0, profile, {0.0, 1.0}, {0.2}, build_indexing_function(profile),
                      std::move(cells));
        const VerifyReport rep = verify_conditions(tree);
        CHECK_FALSE(rep.separation.pass);
        CHECK(rep.separation.margin == doctest::Approx(0.0));
    }
    SUBCASE("child escaping its parent breaks nesting") {
        const ArityProfile p2({2, 2});
        std::map<Address, Interval> cells = {
            {Address{{1}}, {0.0, 0.2}},     {Address{{2}}, {0.8, 1.0}},
            {Address{{1, 1}}, {0.0, 0.01}}, {Address{{1, 2}}, {0.5, 0.51}},  // outside C_1
            {Address{{2, 1}}, {0.8, 0.81}}, {Address{{2, 2}}, {0.85, 0.86}}};
        CellTree tree(2.0, p2, {0.0, 1.0}, {0.2, 0.01}, build_indexing_function(p2),
                      std::move(cells));
        CHECK_FALSE(verify_conditions(tree).nesting.pass);
    }
}

TEST_CASE("builder output verifies for q = 2 and q = 3") {
    const ArityProfile profile({2, 2, 8});
    for (double q : {2.0, 3.0}) {
        const CellTree tree = build_balanced_set(q, profile, {0.0, 1.0});
        const VerifyReport rep = verify_conditions(tree);
        INFO("q = ", q, " separation ", rep.separation.detail, " odd ", rep.odd_level.detail);
        CHECK(rep.all_pass());
        CHECK(rep.separation.margin > rep.strict_threshold);
        CHECK(rep.odd_level.margin > rep.strict_threshold);
        CHECK(tree.cells_at_depth(3).size() == 32);
        // cell-count law
        CHECK(tree.cells_at_depth(1).size() == 2);
        CHECK(tree.cells_at_depth(2).size() == 4);
        // b_n decreasing fast enough for the refined certificate chain
        for (std::size_t n = 1; n < tree.depth(); ++n)
            CHECK(tree.diam_bound(n + 1) < tree.diam_bound(n) / q);
    }
}

TEST_CASE("builder input validation") {
    const ArityProfile profile({2, 2, 8});
    CHECK_THROWS_AS(build_balanced_set(1.5, profile, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_balanced_set(2.0, profile, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("depth-4 profile is the practical ceiling but still builds") {
    const ArityProfile profile({2, 2, 8, 96});
    const CellTree tree = build_balanced_set(2.0, profile, {0.0, 1.0});
    CHECK(tree.cells_at_depth(4).size() == 3072);
    CHECK(verify_conditions(tree).all_pass());
}

TEST_CASE("materialized nets") {
    const CellTree tree = build_balanced_set(2.0, ArityProfile({2, 2, 8}), {0.0, 1.0});
    const CompactNet n1 = materialize_net(tree, 1);
    const CompactNet n2 = materialize_net(tree, 2);
    const CompactNet n3 = materialize_net(tree, 3);
    CHECK(n1.size() == 2);
    CHECK(n2.size() == 4);
    CHECK(n3.size() == 32);
    CHECK(n1.resolution() == tree.diam_bound(1));
    CHECK(hausdorff_distance(n3, n2) <= tree.diam_bound(2));
    CHECK(hausdorff_distance(n2, n1) <= tree.diam_bound(1));
    // resolution soundness against the deepest net
    CHECK(hausdorff_distance(n1, n3) <= tree.diam_bound(1));

    // depth-n cells are pairwise disjoint
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto level = tree.cells_at_depth(n);
        for (std::size_t i = 0; i < level.size(); ++i)
            for (std::size_t j = i + 1; j < level.size(); ++j)
                CHECK(interval_distance(level[i].second, level[j].second) > 0.0);
    }
}

TEST_CASE("addresses of points") {
    const CellTree tree = build_balanced_set(2.0, ArityProfile({2, 2, 8}), {0.0, 1.0});
    for (const auto& [addr, iv] : tree.cells_at_depth(3)) {
        CHECK(address_of_point(tree, tree.representative(addr)) == addr);
    }
    CHECK_THROWS_AS(address_of_point(tree, Point::scalar(0.5)), std::domain_error);
    CHECK_THROWS_AS(address_of_point(tree, Point({0.5, 1.0})), std::domain_error);
    // embedded points resolve through the first axis
    const Address first = tree.cells_at_depth(3).front().first;
    CHECK(address_of_point(tree, Point({tree.representative(first)[0], 0.0})) == first);
}
