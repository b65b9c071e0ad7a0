#pragma once
// Hash-coordinated sampling and estimation sketches: threshold sampling,
// bottom-k, k-partition-min (HyperLogLog registers), and the vector-k sample
// with hole filling by indexed key replication.
//
// All sketches are mergeable: build(A u B) == union(build(A), build(B)) for a
// fixed hasher. Cross-run merges are guarded by a fingerprint of the hasher's
// seed and parameters.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tornadohash/dyadic.hpp"
#include "tornadohash/hashing.hpp"

namespace tornadohash::sketch {

template <class Hasher>
std::uint64_t hasher_fingerprint(const Hasher& h) {
    const HashParams& p = h.params();
    std::uint64_t x = mix64(h.seed() + kGolden64);
    x = mix64(x ^ (static_cast<std::uint64_t>(p.c) << 48 ^ static_cast<std::uint64_t>(p.d) << 32 ^
                   static_cast<std::uint64_t>(p.char_bits) << 16 ^ p.range_bits));
    return x;
}

// Exactly { x : h(x) < p * 2^range_bits } for a dyadic threshold p.
template <class Hasher>
std::vector<Key> threshold_sample(std::span<const Key> keys, const Hasher& h, Dyadic p) {
    const std::uint32_t rb = h.params().range_bits;
    if (p.log2_den > rb)
        throw std::invalid_argument("threshold_sample: p not representable in range_bits");
    if (p.num > (p.log2_den < 64 ? (1ULL << p.log2_den) : ~0ULL))
        throw std::invalid_argument("threshold_sample: p exceeds 1");
    const unsigned __int128 threshold = p.scaled(rb);
    std::vector<Key> out;
    for (Key k : keys)
        if (static_cast<unsigned __int128>(h.hash(k)) < threshold) out.push_back(k);
    return out;
}

// The k distinct keys with smallest (hash, key) pairs, plus the (k+1)-st
// smallest hash when at least k+1 distinct keys have been seen. Ties on the
// hash value are broken by the key, so the entry order is a total order and
// merges are exact.
class BottomKSketch {
public:
    struct Entry {
        std::uint64_t hash;
        std::uint64_t key_bits;
        auto operator<=>(const Entry&) const = default;
    };

    BottomKSketch(std::uint64_t k, std::uint32_t range_bits, std::uint64_t fingerprint);

    void insert(std::uint64_t hash, Key key);
    template <class Hasher>
    void insert_key(const Hasher& h, Key key) {
        insert(h.hash(key), key);
    }

    // Entries currently retained (at most k, sorted ascending).
    std::span<const Entry> entries() const;
    // h_(k+1) when known.
    std::optional<std::uint64_t> threshold() const;
    bool threshold_known() const { return store_.size() > k_; }

    // k / (h_(k+1) / 2^range_bits) once the threshold is known, else the exact
    // count of distinct keys seen.
    double distinct_estimate() const;

    std::uint64_t k() const { return k_; }
    std::uint32_t range_bits() const { return range_bits_; }
    std::uint64_t fingerprint() const { return fingerprint_; }

    friend BottomKSketch bottomk_union(const BottomKSketch& a, const BottomKSketch& b);
    bool operator==(const BottomKSketch&) const = default;

    std::vector<std::uint8_t> serialize() const;
    static BottomKSketch deserialize(std::span<const std::uint8_t> bytes);
    std::string debug_json() const;

private:
    std::uint64_t k_;
    std::uint32_t range_bits_;
    std::uint64_t fingerprint_;
    std::vector<Entry> store_; // up to k+1 smallest distinct (hash, key) pairs
};

template <class Hasher>
BottomKSketch bottomk_build(std::span<const Key> keys, std::uint64_t k, const Hasher& h) {
    BottomKSketch s(k, h.params().range_bits, hasher_fingerprint(h));
    for (Key key : keys) s.insert(h.hash(key), key);
    return s;
}

BottomKSketch bottomk_union(const BottomKSketch& a, const BottomKSketch& b);

// k-partition-min with HyperLogLog registers: bucket = top log2(k) hash bits,
// register = max leading-zero count of the local hash, -1 when empty.
class KPartitionMinSketch {
public:
    KPartitionMinSketch(std::uint64_t k, std::uint32_t range_bits, std::uint64_t fingerprint);

    void insert(std::uint64_t hash);
    template <class Hasher>
    void insert_key(const Hasher& h, Key key) {
        insert(h.hash(key));
    }

    // Harmonic-mean estimate with the usual alpha_k constant and a
    // small-range linear-counting correction, gated so the estimate is
    // monotone non-decreasing in every register.
    double estimate() const;

    std::span<const std::int8_t> registers() const { return regs_; }
    std::uint64_t k() const { return k_; }
    std::uint32_t range_bits() const { return range_bits_; }
    std::uint64_t fingerprint() const { return fingerprint_; }

    friend KPartitionMinSketch kpm_union(const KPartitionMinSketch& a, const KPartitionMinSketch& b);
    bool operator==(const KPartitionMinSketch&) const = default;

    std::vector<std::uint8_t> serialize() const;
    static KPartitionMinSketch deserialize(std::span<const std::uint8_t> bytes);
    std::string debug_json() const;

private:
    std::uint64_t k_;
    std::uint32_t log2k_;
    std::uint32_t range_bits_;
    std::uint64_t fingerprint_;
    std::vector<std::int8_t> regs_;
};

template <class Hasher>
KPartitionMinSketch kpm_build(std::span<const Key> keys, std::uint64_t k, const Hasher& h) {
    KPartitionMinSketch s(k, h.params().range_bits, hasher_fingerprint(h));
    for (Key key : keys) s.insert(h.hash(key));
    return s;
}

KPartitionMinSketch kpm_union(const KPartitionMinSketch& a, const KPartitionMinSketch& b);

// Vector-k sample (one-permutation hashing) over indexed keys from [J] x A.
// Replicas are formed by prepending the replica index as an extra low
// character, so the hasher must be built for c+1 characters.
class VectorKSample {
public:
    struct Slot {
        std::uint64_t local_hash = 0;
        std::uint64_t indexed_key = 0;
        bool occupied = false;
        bool operator==(const Slot&) const = default;
    };

    VectorKSample(std::uint64_t k, std::uint32_t j_rep, std::uint32_t range_bits,
                  std::uint64_t fingerprint);

    void insert(std::uint64_t hash, std::uint64_t indexed_key_bits);

    std::span<const Slot> slots() const { return slots_; }
    std::vector<std::uint64_t> holes() const;
    std::uint64_t k() const { return k_; }
    std::uint32_t j_rep() const { return j_rep_; }
    std::uint64_t fingerprint() const { return fingerprint_; }

    friend VectorKSample vectork_union(const VectorKSample& a, const VectorKSample& b);
    bool operator==(const VectorKSample&) const = default;

    std::vector<std::uint8_t> serialize() const;
    static VectorKSample deserialize(std::span<const std::uint8_t> bytes);
    std::string debug_json() const;

private:
    std::uint64_t k_;
    std::uint32_t log2k_;
    std::uint32_t j_rep_;
    std::uint32_t range_bits_;
    std::uint64_t fingerprint_;
    std::vector<Slot> slots_;
};

// Replication count J with J*|A| >= max(|A|, k ln(k / target_error_p)).
std::uint32_t vectork_replication(std::uint64_t n, std::uint64_t k, double target_error_p);

// hasher must have params().c == (characters of keys) + 1; keys are validated
// against the narrower width. j_override forces a fixed J (for mergeability
// across sets of different sizes); 0 means compute from target_error_p.
template <class Hasher>
VectorKSample vectork_build(std::span<const Key> keys, std::uint64_t k, double target_error_p,
                            const Hasher& h, std::uint32_t j_override = 0) {
    const HashParams& p = h.params();
    if (p.c < 2) throw std::invalid_argument("vectork_build: hasher must cover c+1 characters");
    if (k < 1) throw std::invalid_argument("vectork_build: k must be >= 1");
    const std::uint32_t J =
        j_override ? j_override : vectork_replication(keys.size(), k, target_error_p);
    if (J > p.char_mask() + 1)
        throw std::invalid_argument("vectork_build: replication count exceeds the alphabet");
    VectorKSample s(k, J, p.range_bits, hasher_fingerprint(h));
    const std::uint32_t base_bits = (p.c - 1) * p.char_bits;
    for (Key key : keys) {
        if (base_bits < 64 && (key.bits >> base_bits) != 0)
            throw std::invalid_argument("vectork_build: key does not fit c characters");
        for (std::uint32_t j = 0; j < J; ++j) {
            const Key indexed{(key.bits << p.char_bits) | j};
            s.insert(h.hash(indexed), indexed.bits);
        }
    }
    return s;
}

VectorKSample vectork_union(const VectorKSample& a, const VectorKSample& b);

// Fraction of coordinates whose min-keys agree; coordinates where either side
// is a hole are excluded from numerator and denominator.
double jaccard_estimate(const VectorKSample& a, const VectorKSample& b);

// Coordinates mapped to +-1/sqrt(k) by the least significant free bit of the
// min-key's local hash. Requires a hole-free sample.
struct SignedProjection {
    std::uint64_t k = 0;
    std::vector<std::int8_t> signs; // +-1

    double value(std::size_t i) const;
};

SignedProjection signed_projection(const VectorKSample& v);

// Exact (matches - mismatches) / k; dot(v, v) == 1 exactly.
double dot(const SignedProjection& a, const SignedProjection& b);

// |{x in sample : pred(x)}| / |sample|; throws on an empty sample.
double frequency_estimate(std::span<const Key> sample, const std::function<bool(Key)>& pred);

} // namespace tornadohash::sketch
