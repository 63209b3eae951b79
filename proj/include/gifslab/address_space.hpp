#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gifslab {

/// Finite digit string (i_1,...,i_k) with 1 <= i_j <= a_j. Full infinite
/// addresses are represented by depth-N prefixes with an implicit all-ones
/// tail.
struct Address {
    std::vector<std::uint32_t> digits;

    std::size_t depth() const { return digits.size(); }
    Address prefix(std::size_t k) const {
        return Address{{digits.begin(), digits.begin() + k}};
    }
    Address child(std::uint32_t next) const {
        Address a = *this;
        a.digits.push_back(next);
        return a;
    }
    /// Dotted form "1.2.3" used in JSON keys and error messages.
    std::string str() const;

    friend bool operator==(const Address& a, const Address& b) { return a.digits == b.digits; }
    friend bool operator<(const Address& a, const Address& b) {
        if (a.digits.size() != b.digits.size()) return a.digits.size() < b.digits.size();
        return a.digits < b.digits;  // length-then-lex, the canonical enumeration order
    }
};

/// Arity sequence (a_1,...,a_N) with the growth condition a_1 >= 2 and
/// a_{n+1} >= n * a_1 * ... * a_n, rejected at construction when violated.
class ArityProfile {
public:
    explicit ArityProfile(std::vector<std::uint32_t> arities);

    std::size_t depth() const { return arities_.size(); }
    std::uint32_t arity(std::size_t level) const;  // 1-based level
    const std::vector<std::uint32_t>& arities() const { return arities_; }

    /// Number of depth-k addresses, a_1 * ... * a_k.
    std::uint64_t count_at(std::size_t k) const;

    /// Validates a digit string against this profile.
    bool admits(const Address& a) const;

    friend bool operator==(const ArityProfile&, const ArityProfile&) = default;

private:
    std::vector<std::uint32_t> arities_;
};

/// All depth-k addresses in lexicographic order.
std::vector<Address> enumerate_addresses(const ArityProfile& profile, std::size_t k);

/// Surjection from odd naturals onto the represented addresses with
/// Phi(n) of depth <= n for every assigned odd n.
class IndexingFunction {
public:
    IndexingFunction() = default;
    explicit IndexingFunction(std::map<std::uint64_t, Address> assignment);

    const Address& at(std::uint64_t odd) const;
    const std::map<std::uint64_t, Address>& assignment() const { return assignment_; }

private:
    std::map<std::uint64_t, Address> assignment_;
};

/// Assigns the m-th element of the length-then-lex enumeration of all
/// addresses of depth <= N to the odd number 2m-1, then verifies the
/// depth(Phi(n)) <= n constraint (throws if the profile ever broke it).
IndexingFunction build_indexing_function(const ArityProfile& profile);

/// Parity-sum digit transformer from the witnessing construction, with a
/// prefix of length p >= 1: output (prefix, beta_1, ..., beta_{L-p}) where
/// beta_j = 1 + sum_{m=1}^{a_{j+p}-1} (digit j of input m, mod 2).
/// out_depth is the total output length L (prefix included); inputs must
/// number at least max_j (a_{j+p}-1) and each have depth >= L-p.
Address digit_transform_prefixed(const Address& prefix, const std::vector<Address>& inputs,
                                 const ArityProfile& profile, std::size_t out_depth);

/// The order-1 transformer: first digit i, betas from arities a_2, a_3, ...
Address digit_transform(std::uint32_t first_digit, const std::vector<Address>& inputs,
                        const ArityProfile& profile, std::size_t out_depth);

/// Number of input addresses digit_transform_prefixed reads to emit an
/// output of length out_depth with the given prefix length.
std::size_t transform_window(const ArityProfile& profile, std::size_t prefix_len,
                             std::size_t out_depth);

struct PreimageWitness {
    std::uint32_t first_digit;
    std::vector<Address> inputs;
};

/// Inverse witness for digit_transform: input addresses whose digit k is 1
/// for positions j <= target[k+1]-1 and 2 otherwise, so the round trip
/// digit_transform(target[1], inputs) == target holds exactly.
PreimageWitness preimage_witness(const Address& target, const ArityProfile& profile);

}  // namespace gifslab
