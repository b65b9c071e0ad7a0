#pragma once
// Simple tabulation and tornado tabulation hashing.
//
// A key is a vector of c characters over Sigma = [2^char_bits], bit-packed
// little-endian (character 0 in the low bits). A tornado hasher first expands
// the key into a derived key of c+d characters: characters 1..c-1 are copied,
// character c is twisted by XOR with a tabulation hash of the prefix, and each
// derived character is a tabulation hash of the full preceding prefix. The
// final hash is one round of simple tabulation over the derived key.
//
// All hashers are immutable after construction and safe for concurrent reads.

#include <array>
#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "tornadohash/prng.hpp"

namespace tornadohash {

struct HashParams {
    std::uint32_t c = 4;          // characters per original key
    std::uint32_t d = 0;          // derived characters
    std::uint32_t char_bits = 16; // bits per character, |Sigma| = 2^char_bits
    std::uint32_t range_bits = 64;

    static constexpr std::uint32_t kMaxDerivedChars = 24;

    void validate() const; // throws std::invalid_argument

    std::uint64_t sigma() const noexcept { return 1ULL << char_bits; }
    std::uint64_t char_mask() const noexcept { return sigma() - 1; }
    std::uint64_t range_mask() const noexcept {
        return range_bits >= 64 ? ~0ULL : (1ULL << range_bits) - 1;
    }
    std::uint32_t derived_chars() const noexcept { return c + d; }
    std::uint32_t key_bits() const noexcept { return c * char_bits; }

    bool operator==(const HashParams&) const = default;
};

// Bit-packed key; character i occupies bits [i*char_bits, (i+1)*char_bits).
struct Key {
    std::uint64_t bits = 0;
    constexpr auto operator<=>(const Key&) const = default;
};

Key make_key(std::span<const std::uint32_t> chars, const HashParams& p);
std::vector<std::uint32_t> key_chars(Key k, const HashParams& p);

inline std::uint32_t key_char(Key k, std::uint32_t i, const HashParams& p) noexcept {
    return static_cast<std::uint32_t>((k.bits >> (i * p.char_bits)) & p.char_mask());
}

// Throws std::invalid_argument when bits above c*char_bits are set.
void validate_key(Key k, const HashParams& p);

struct DerivedKey {
    std::array<std::uint32_t, HashParams::kMaxDerivedChars> chars{};
    std::uint32_t len = 0;

    std::span<const std::uint32_t> view() const noexcept { return {chars.data(), len}; }
    std::span<const std::uint32_t> prefix(std::uint32_t n) const noexcept { return {chars.data(), n}; }
    bool operator==(const DerivedKey& o) const noexcept {
        return len == o.len && std::equal(chars.begin(), chars.begin() + len, o.chars.begin());
    }
};

// h(x) = T_1[x_1] ^ ... ^ T_c[x_c] with c fully random tables.
class SimpleTabulation {
public:
    SimpleTabulation(std::uint64_t seed, HashParams params);

    std::uint64_t hash(Key k) const;
    std::uint64_t hash_chars(std::span<const std::uint32_t> chars) const; // size must be c

    const HashParams& params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const std::uint64_t> table(std::uint32_t position) const;

private:
    HashParams params_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> tables_; // c tables of sigma() entries, flattened
};

class TornadoHasher {
public:
    TornadoHasher(std::uint64_t seed, HashParams params);

    DerivedKey derive(Key k) const;
    std::uint64_t hash(Key k) const;

    // h(x) = hbar0(x) ^ top_table(c+d-1)[hbar1(x)]: everything before the last
    // top-table lookup, plus the last derived character. Requires d >= 1.
    struct Split {
        std::uint64_t hbar0;
        std::uint32_t hbar1;
    };
    Split split(Key k) const;
    std::uint64_t hash_from_split(Split s) const {
        return s.hbar0 ^ top(params_.derived_chars() - 1, s.hbar1);
    }

    const HashParams& params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }

    // Table accessors (tests, serialization, packed-equivalence checks).
    // twist_table: position j in [0, c-1); derive_table(i, j): table j of
    // h~i for i in [1, d], j in [0, c+i-1); top_table: position in [0, c+d).
    std::span<const std::uint32_t> twist_table(std::uint32_t position) const;
    std::span<const std::uint32_t> derive_table(std::uint32_t i, std::uint32_t position) const;
    std::span<const std::uint64_t> top_table(std::uint32_t position) const;

private:
    std::uint64_t top(std::uint32_t position, std::uint32_t chr) const noexcept {
        return top_tables_[position * params_.sigma() + chr];
    }

    HashParams params_;
    std::uint64_t seed_;
    std::vector<std::uint32_t> char_tables_; // h0 tables then h~1..h~d tables
    std::vector<std::uint64_t> top_tables_;  // (c+d) * sigma()
    std::vector<std::size_t> derive_offsets_; // start of h~i block, i in [1, d]
};

// Baseline "fully random" hasher: per key the value is drawn uniformly once
// (as a pure function of seed and key) and memoized. Concurrent calls observe
// a single consistent value per key.
class RandomOracle {
public:
    RandomOracle(std::uint64_t seed, HashParams params);

    std::uint64_t hash(Key k) const;
    std::size_t memo_size() const;

    const HashParams& params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    HashParams params_;
    std::uint64_t seed_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

} // namespace tornadohash
