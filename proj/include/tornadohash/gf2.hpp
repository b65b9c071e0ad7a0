#pragma once
// Zero-sets and linear independence of (generalized) keys over GF(2).
//
// A generalized key is a set of position characters (i, x_i). A family is a
// zero-set when every position character occurs an even number of times; a
// family is linearly independent when no nonempty subfamily is a zero-set,
// equivalently when the position-character incidence matrix has full rank.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tornadohash/hashing.hpp"

namespace tornadohash::gf2 {

struct PositionChar {
    std::uint32_t position = 1; // 1-based
    std::uint32_t character = 0;
    auto operator<=>(const PositionChar&) const = default;
};

// Sorted, duplicate-free set of position characters.
using GeneralizedKey = std::vector<PositionChar>;

struct KeyFamily {
    std::vector<GeneralizedKey> members; // duplicates allowed (tuples)
};

GeneralizedKey to_generalized(std::span<const std::uint32_t> chars);
GeneralizedKey to_generalized(Key k, const HashParams& p);
GeneralizedKey to_generalized(const DerivedKey& dk);

// Position characters occurring an odd number of times across the family.
GeneralizedKey sym_diff(const KeyFamily& family);
bool is_zero_set(const KeyFamily& family);

struct IndependenceResult {
    bool independent = true;
    // When dependent: indices into the family forming one zero subfamily,
    // taken from the elimination kernel. Minimal by construction, not
    // guaranteed minimum over all witnesses.
    std::vector<std::size_t> witness;
    explicit operator bool() const noexcept { return independent; }
};

IndependenceResult is_linearly_independent(const KeyFamily& family);

// Convenience: independence of derived keys of a key set. When prefix_only,
// the last derived character is dropped (length c+d-1 prefixes).
IndependenceResult derived_independent(const TornadoHasher& h, std::span<const Key> keys,
                                       bool prefix_only = false);

// Exact count of ordered k-tuples (repeats allowed) from S whose symmetric
// difference is empty. Guard: |S|^k <= 10^8.
std::uint64_t count_zero_ktuples(std::span<const GeneralizedKey> S, std::uint32_t k);

// 3^c * n^(k-2), exact.
boost::multiprecision::cpp_int zero_bound(std::uint64_t n, std::uint32_t c, std::uint32_t k);

} // namespace tornadohash::gf2
