#include <doctest.h>

#include <random>
#include <set>

#include "gifslab/address_space.hpp"

using namespace gifslab;

TEST_CASE("arity profile growth condition") {
    CHECK_NOTHROW(ArityProfile({2, 2, 8}));
    CHECK_NOTHROW(ArityProfile({2, 2, 8, 96}));
    CHECK_NOTHROW(ArityProfile({2}));
    CHECK_THROWS_AS(ArityProfile({1, 2}), std::invalid_argument);   // a_1 < 2
    CHECK_THROWS_AS(ArityProfile({2, 1, 8}), std::invalid_argument);  // a_2 < 1*a_1
    CHECK_THROWS_AS(ArityProfile({2, 2, 7}), std::invalid_argument);  // a_3 < 2*a_1*a_2
    CHECK(ArityProfile({2, 2, 8}).count_at(3) == 32);
}

TEST_CASE("address enumeration is length-lex") {
    const ArityProfile profile({2, 2, 8});
    CHECK(enumerate_addresses(profile, 1) ==
          std::vector<Address>{Address{{1}}, Address{{2}}});
    CHECK(enumerate_addresses(profile, 2) ==
          std::vector<Address>{Address{{1, 1}}, Address{{1, 2}}, Address{{2, 1}}, Address{{2, 2}}});
    CHECK(enumerate_addresses(profile, 3).size() == 32);
    CHECK_THROWS_AS(enumerate_addresses(profile, 4), std::out_of_range);
}

TEST_CASE("indexing function") {
    const ArityProfile profile({2, 2, 8});
    const IndexingFunction phi = build_indexing_function(profile);
    CHECK(phi.at(1) == Address{{1}});
    CHECK(phi.at(3) == Address{{2}});
    CHECK(phi.at(5) == Address{{1, 1}});
    for (const auto& [n, addr] : phi.assignment()) {
        CHECK(n % 2 == 1);
        CHECK(addr.depth() <= n);
    }
    // every depth <= 2 address appears within the first 2*(2+4)-1 = 11 indices
    std::set<Address> seen;
    for (std::uint64_t n = 1; n <= 11; n += 2) seen.insert(phi.at(n));
    for (std::size_t k = 1; k <= 2; ++k)
        for (const Address& a : enumerate_addresses(profile, k)) CHECK(seen.count(a) == 1);
    // surjectivity onto the represented depths
    CHECK(phi.assignment().size() == 2 + 4 + 32);
}

TEST_CASE("digit transform examples") {
    const ArityProfile profile({2, 2, 8});
    SUBCASE("single odd first digit") {
        std::vector<Address> inputs(7, Address{{2, 2}});
        inputs[0] = Address{{1, 2}};
        const Address out = digit_transform(1, inputs, profile, 2);
        CHECK(out == Address{{1, 2}});  // beta_1 = 1 + (1 mod 2)
    }
    SUBCASE("all even digits give all-ones betas") {
        std::vector<Address> inputs(7, Address{{2, 2}});
        CHECK(digit_transform(2, inputs, profile, 3) == Address{{2, 1, 1}});
    }
    SUBCASE("beta counts odd digits in the window") {
        std::vector<Address> inputs;
        for (int d2 : {1, 1, 2, 2, 2, 2, 2}) inputs.push_back(Address{{2, std::uint32_t(d2)}});
        const Address out = digit_transform(1, inputs, profile, 3);
        CHECK(out.digits[2] == 3);  // 1 + two odd digits
    }
    SUBCASE("window accounting") {
        CHECK(transform_window(profile, 1, 3) == 7);
        CHECK(transform_window(profile, 1, 2) == 1);
        CHECK(transform_window(profile, 2, 3) == 7);
        std::vector<Address> too_few(3, Address{{1, 1}});
        CHECK_THROWS_AS(digit_transform(1, too_few, profile, 3), std::invalid_argument);
        std::vector<Address> too_shallow(7, Address{{1}});
        CHECK_THROWS_AS(digit_transform(1, too_shallow, profile, 3), std::invalid_argument);
    }
}

TEST_CASE("beta digits stay in range (exhaustive depth 3)") {
    const ArityProfile profile({2, 2, 8});
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint32_t> digit(1, 2);
    for (int it = 0; it < 500; ++it) {
        std::vector<Address> inputs;
        for (int m = 0; m < 7; ++m) inputs.push_back(Address{{digit(rng), digit(rng)}});
        const Address out = digit_transform(digit(rng), inputs, profile, 3);
        for (std::size_t j = 1; j < 3; ++j) {
            CHECK(out.digits[j] >= 1);
            CHECK(out.digits[j] <= profile.arity(j + 1));
        }
    }
}

TEST_CASE("transform depends only on digit parities") {
    const ArityProfile profile({3, 3, 18});
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::uint32_t> digit(1, 3);
    for (int it = 0; it < 200; ++it) {
        std::vector<Address> inputs;
        for (std::uint32_t m = 0; m < 17; ++m) inputs.push_back(Address{{digit(rng), digit(rng)}});
        const Address base = digit_transform(1, inputs, profile, 3);
        auto bumped = inputs;
        std::uniform_int_distribution<std::size_t> pick(0, bumped.size() - 1);
        Address& a = bumped[pick(rng)];
        const std::size_t j = pick(rng) % 2;
        if (a.digits[j] + 2 <= profile.arity(j + 1)) a.digits[j] += 2;
        CHECK(digit_transform(1, bumped, profile, 3) == base);
    }
}

TEST_CASE("preimage witness round trip") {
    const ArityProfile profile({2, 2, 8});
    SUBCASE("hand-checked target (2,1,3)") {
        const PreimageWitness w = preimage_witness(Address{{2, 1, 3}}, profile);
        CHECK(w.first_digit == 2);
        REQUIRE(w.inputs.size() == 7);
        for (const Address& a : w.inputs) CHECK(a.digits[0] == 2);  // i_2 - 1 = 0 ones
        std::vector<std::uint32_t> digit2;
        for (const Address& a : w.inputs) digit2.push_back(a.digits[1]);
        CHECK(digit2 == std::vector<std::uint32_t>{1, 1, 2, 2, 2, 2, 2});
    }
    SUBCASE("all-ones target uses even digits only") {
        const PreimageWitness w = preimage_witness(Address{{1, 1, 1}}, profile);
        for (const Address& a : w.inputs)
            for (std::uint32_t d : a.digits) CHECK(d == 2);
    }
    SUBCASE("round trip over every depth-3 target") {
        for (const Address& target : enumerate_addresses(profile, 3)) {
            const PreimageWitness w = preimage_witness(target, profile);
            CHECK(digit_transform(w.first_digit, w.inputs, profile, 3) == target);
        }
    }
}
