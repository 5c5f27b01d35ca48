#pragma once

// Bit-level primitives on positive integers: the least/greatest exponents of
// the binary expansion (lam/mu), the apartness condition, and enumeration of
// adjacent (consecutive-run) sums.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ahtlab/errors.hpp"

namespace ahtlab {

// All values live in [1, 2^B) for a configured bit budget B.
using PosInt = std::uint64_t;

inline constexpr int kDefaultBitBudget = 63;

inline PosInt budget_cap(int bit_budget = kDefaultBitBudget) {
    return (PosInt{1} << bit_budget) - 1;
}

// Least exponent in the binary expansion of n (index of the lowest set bit).
inline int lam(PosInt n) {
    if (n == 0) throw std::domain_error("lam undefined at 0");
    return std::countr_zero(n);
}

// Greatest exponent in the binary expansion of n (index of the highest set bit).
inline int mu(PosInt n) {
    if (n == 0) throw std::domain_error("mu undefined at 0");
    return std::bit_width(n) - 1;
}

inline int popcount(PosInt n) {
    return std::popcount(n);
}

namespace detail {
inline void require_increasing(std::span<const PosInt> xs, const char* what) {
    if (xs.empty()) throw std::invalid_argument(std::string(what) + ": empty set");
    if (xs.front() == 0) throw std::invalid_argument(std::string(what) + ": elements must be positive");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1])
            throw std::invalid_argument(std::string(what) + ": not strictly increasing");
}
} // namespace detail

// Apartness: for adjacent x < x' the bit supports are separated, mu(x) < lam(x').
// Adjacency suffices; the exponent intervals then chain for all pairs.
inline bool is_apart(std::span<const PosInt> xs) {
    detail::require_increasing(xs, "is_apart");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (mu(xs[i - 1]) >= lam(xs[i])) return false;
    return true;
}

inline bool is_apart(const std::vector<PosInt>& xs) {
    return is_apart(std::span<const PosInt>(xs));
}

// A strictly increasing set whose elements occupy disjoint, order-respecting
// exponent intervals. Validated on construction.
class ApartSet {
public:
    explicit ApartSet(std::vector<PosInt> elements) : elements_(std::move(elements)) {
        if (!is_apart(elements_))
            throw std::invalid_argument("ApartSet: apartness condition violated");
    }

    const std::vector<PosInt>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    PosInt operator[](std::size_t i) const { return elements_[i]; }

private:
    std::vector<PosInt> elements_;
};

// A run of consecutive elements h_first..h_last (1-based, inclusive) and its sum.
struct Run {
    std::size_t first = 0;
    std::size_t last = 0;
    PosInt sum = 0;

    std::size_t length() const { return last - first + 1; }
    bool operator==(const Run&) const = default;
};

// All runs with length in [min_len, max_len], enumerated by length ascending and
// start index ascending, so AS^{=t} blocks concatenate into the full AS(H).
// max_len == 0 means |H|.
inline std::vector<Run> adjacent_sums(std::span<const PosInt> h,
                                      std::size_t min_len = 1,
                                      std::size_t max_len = 0,
                                      int bit_budget = kDefaultBitBudget) {
    detail::require_increasing(h, "adjacent_sums");
    const std::size_t m = h.size();
    if (max_len == 0) max_len = m;
    if (min_len < 1 || min_len > max_len)
        throw std::invalid_argument("adjacent_sums: need 1 <= min_len <= max_len");

    const PosInt cap = budget_cap(bit_budget);
    std::vector<Run> runs;
    for (std::size_t len = min_len; len <= max_len && len <= m; ++len) {
        for (std::size_t i = 1; i + len - 1 <= m; ++i) {
            PosInt sum = 0;
            for (std::size_t t = i; t < i + len; ++t) {
                sum += h[t - 1];
                if (sum > cap) throw BudgetError("adjacent_sums: run sum exceeds bit budget");
            }
            runs.push_back(Run{i, i + len - 1, sum});
        }
    }
    return runs;
}

inline std::vector<Run> adjacent_sums(const std::vector<PosInt>& h,
                                      std::size_t min_len = 1,
                                      std::size_t max_len = 0,
                                      int bit_budget = kDefaultBitBudget) {
    return adjacent_sums(std::span<const PosInt>(h), min_len, max_len, bit_budget);
}

// Endpoints of the run h_i..h_j of an apart set: (lam(h_i), mu(h_j)).
// Contract: equals (lam(sum), mu(sum)) of the run itself.
inline std::pair<int, int> run_endpoints(const ApartSet& h, std::size_t i, std::size_t j) {
    if (i < 1 || j < i || j > h.size())
        throw std::invalid_argument("run_endpoints: index out of range");
    return {lam(h[i - 1]), mu(h[j - 1])};
}

// Apart blocks spanned by consecutive exponents: for increasing j_1 < …
// < j_{m+1} the t-th block is h_t = 2^{j_{t+1}+1} - 2^{j_t+1}, the
// number whose binary support fills (j_t, j_{t+1}]. By construction
// lam(h_t) = j_t + 1 and mu(h_t) = j_{t+1}, so the blocks are apart.
inline std::vector<PosInt> blocks_from_rt2(std::span<const PosInt> j) {
    if (j.size() < 2)
        throw std::invalid_argument("blocks_from_rt2: need at least two exponents");
    for (std::size_t t = 1; t < j.size(); ++t)
        if (j[t] <= j[t - 1])
            throw std::invalid_argument("blocks_from_rt2: exponents must increase");
    if (j.back() >= 63) throw BudgetError("blocks_from_rt2: exponent exceeds bit budget");
    std::vector<PosInt> h;
    h.reserve(j.size() - 1);
    for (std::size_t t = 0; t + 1 < j.size(); ++t)
        h.push_back((PosInt{1} << (j[t + 1] + 1)) - (PosInt{1} << (j[t] + 1)));
    return h;
}

inline std::vector<PosInt> blocks_from_rt2(const std::vector<PosInt>& j) {
    return blocks_from_rt2(std::span<const PosInt>(j));
}

// lam/mu images of an apart set. Apartness chains the exponents as
// lam(h_1) <= mu(h_1) < lam(h_2) <= mu(h_2) < …, so both images are
// strictly increasing and keep the set's size.
inline std::pair<std::vector<PosInt>, std::vector<PosInt>> project_aht_witness(
    std::span<const PosInt> h) {
    if (h.empty()) throw std::invalid_argument("project_aht_witness: empty set");
    if (!is_apart(h)) throw std::invalid_argument("project_aht_witness: set is not apart");
    std::vector<PosInt> lo, hi;
    lo.reserve(h.size());
    hi.reserve(h.size());
    for (PosInt x : h) {
        lo.push_back(PosInt(lam(x)));
        hi.push_back(PosInt(mu(x)));
    }
    return {std::move(lo), std::move(hi)};
}

inline std::pair<std::vector<PosInt>, std::vector<PosInt>> project_aht_witness(
    const std::vector<PosInt>& h) {
    return project_aht_witness(std::span<const PosInt>(h));
}

} // namespace ahtlab
