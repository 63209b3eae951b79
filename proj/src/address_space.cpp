#include "gifslab/address_space.hpp"

#include <stdexcept>

namespace gifslab {

std::string Address::str() const {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(digits[i]);
    }
    return s;
}

ArityProfile::ArityProfile(std::vector<std::uint32_t> arities) : arities_(std::move(arities)) {
    if (arities_.empty()) throw std::invalid_argument("ArityProfile: depth must be >= 1");
    if (arities_[0] < 2) throw std::invalid_argument("ArityProfile: a_1 must be >= 2");
    std::uint64_t product = arities_[0];
    for (std::size_t n = 1; n < arities_.size(); ++n) {
        const std::uint64_t required = static_cast<std::uint64_t>(n) * product;
        if (arities_[n] < required)
            throw std::invalid_argument("ArityProfile: a_" + std::to_string(n + 1) +
                                        " must be >= " + std::to_string(required));
        product *= arities_[n];
    }
}

std::uint32_t ArityProfile::arity(std::size_t level) const {
    if (level < 1 || level > arities_.size())
        throw std::out_of_range("ArityProfile: level out of range");
    return arities_[level - 1];
}

std::uint64_t ArityProfile::count_at(std::size_t k) const {
    if (k < 1 || k > arities_.size()) throw std::out_of_range("ArityProfile: depth out of range");
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < k; ++i) c *= arities_[i];
    return c;
}

bool ArityProfile::admits(const Address& a) const {
    if (a.depth() == 0 || a.depth() > depth()) return false;
    for (std::size_t j = 0; j < a.depth(); ++j) {
        if (a.digits[j] < 1 || a.digits[j] > arities_[j]) return false;
    }
    return true;
}

std::vector<Address> enumerate_addresses(const ArityProfile& profile, std::size_t k) {
    if (k < 1 || k > profile.depth())
        throw std::out_of_range("enumerate_addresses: depth out of range");
    std::vector<Address> out;
    out.reserve(profile.count_at(k));
    Address cur;
    cur.digits.assign(k, 1);
    while (true) {
        out.push_back(cur);
        // lexicographic odometer
        std::size_t j = k;
        while (j > 0) {
            if (cur.digits[j - 1] < profile.arity(j)) {
                ++cur.digits[j - 1];
                break;
            }
            cur.digits[j - 1] = 1;
            --j;
        }
        if (j == 0) break;
    }
    return out;
}

IndexingFunction::IndexingFunction(std::map<std::uint64_t, Address> assignment)
    : assignment_(std::move(assignment)) {
    for (const auto& [n, addr] : assignment_) {
        if (n % 2 == 0) throw std::invalid_argument("IndexingFunction: keys must be odd");
        if (addr.depth() > n)
            throw std::invalid_argument("IndexingFunction: depth(Phi(" + std::to_string(n) +
                                        ")) exceeds " + std::to_string(n));
    }
}

const Address& IndexingFunction::at(std::uint64_t odd) const {
    auto it = assignment_.find(odd);
    if (it == assignment_.end())
        throw std::out_of_range("IndexingFunction: no value at " + std::to_string(odd));
    return it->second;
}

IndexingFunction build_indexing_function(const ArityProfile& profile) {
    std::map<std::uint64_t, Address> assignment;
    std::uint64_t m = 0;
    for (std::size_t k = 1; k <= profile.depth(); ++k) {
        for (const Address& a : enumerate_addresses(profile, k)) {
            ++m;
            const std::uint64_t odd = 2 * m - 1;
            if (a.depth() > odd)
                throw std::logic_error("build_indexing_function: constraint violated at " +
                                       std::to_string(odd));
            assignment.emplace(odd, a);
        }
    }
    return IndexingFunction(std::move(assignment));
}

std::size_t transform_window(const ArityProfile& profile, std::size_t prefix_len,
                             std::size_t out_depth) {
    if (prefix_len < 1 || out_depth < prefix_len || out_depth > profile.depth())
        throw std::invalid_argument("transform_window: bad prefix/output depth");
    std::size_t window = 0;
    for (std::size_t j = 1; j + prefix_len <= out_depth; ++j)
        window = std::max<std::size_t>(window, profile.arity(j + prefix_len) - 1);
    return window;
}

Address digit_transform_prefixed(const Address& prefix, const std::vector<Address>& inputs,
                                 const ArityProfile& profile, std::size_t out_depth) {
    const std::size_t p = prefix.depth();
    if (p < 1 || out_depth < p || out_depth > profile.depth())
        throw std::invalid_argument("digit_transform: bad output depth");
    for (std::size_t j = 0; j < p; ++j)
        if (prefix.digits[j] < 1 || prefix.digits[j] > profile.arity(j + 1))
            throw std::invalid_argument("digit_transform: prefix digit out of range");

    Address out = prefix;
    for (std::size_t j = 1; j + p <= out_depth; ++j) {
        const std::uint32_t window = profile.arity(j + p) - 1;
        if (inputs.size() < window)
            throw std::invalid_argument("digit_transform: need " + std::to_string(window) +
                                        " inputs for output digit " + std::to_string(j + p));
        std::uint32_t parity_sum = 0;
        for (std::uint32_t m = 0; m < window; ++m) {
            if (inputs[m].depth() < j)
                throw std::invalid_argument("digit_transform: input " + std::to_string(m + 1) +
                                            " too shallow for output digit " +
                                            std::to_string(j + p));
            parity_sum += inputs[m].digits[j - 1] % 2;
        }
        out.digits.push_back(1 + parity_sum);
    }
    return out;
}

Address digit_transform(std::uint32_t first_digit, const std::vector<Address>& inputs,
                        const ArityProfile& profile, std::size_t out_depth) {
    if (first_digit < 1 || first_digit > profile.arity(1))
        throw std::invalid_argument("digit_transform: first digit out of range");
    return digit_transform_prefixed(Address{{first_digit}}, inputs, profile, out_depth);
}

PreimageWitness preimage_witness(const Address& target, const ArityProfile& profile) {
    if (!profile.admits(target)) throw std::invalid_argument("preimage_witness: malformed target");
    const std::size_t L = target.depth();
    const std::size_t window = L >= 2 ? transform_window(profile, 1, L) : 0;
    const std::size_t in_depth = L - 1;
    PreimageWitness w;
    w.first_digit = target.digits[0];
    w.inputs.assign(window, Address{});
    for (std::size_t m = 0; m < window; ++m) {
        w.inputs[m].digits.assign(in_depth, 2);
        for (std::size_t k = 1; k <= in_depth; ++k) {
            // digit k of input m is 1 for m+1 <= target[k+1]-1, else 2;
            // the parity sum over the window is then exactly target[k+1]-1.
            if (m + 1 <= static_cast<std::size_t>(target.digits[k]) - 1)
                w.inputs[m].digits[k - 1] = 1;
        }
    }
    return w;
}

}  // namespace gifslab
