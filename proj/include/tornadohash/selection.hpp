#pragma once
// Selection by bitmask on the top hash bits, bucket decomposition by last
// derived character, and layer statistics S_i = #{alpha : |X_alpha| >= i}.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "tornadohash/dyadic.hpp"
#include "tornadohash/hashing.hpp"

namespace tornadohash {

// A key is selected iff the t most significant hash bits equal mask_value.
// Threshold sampling with a dyadic probability 1/2^t is the mask_value = 0
// special case.
struct Selector {
    std::uint32_t t = 0;
    std::uint64_t mask_value = 0;

    void validate(const HashParams& p) const {
        if (t > p.range_bits)
            throw std::invalid_argument("Selector: t exceeds range_bits");
        if (t < 64 && mask_value >= (1ULL << t))
            throw std::invalid_argument("Selector: mask_value does not fit in t bits");
    }
    bool selects(std::uint64_t hash, const HashParams& p) const noexcept {
        if (t == 0) return true;
        return (hash >> (p.range_bits - t)) == mask_value;
    }
};

struct SelectionResult {
    std::vector<Key> selected;
    Dyadic mu; // exact n / 2^t
};

template <class Hasher>
SelectionResult select(std::span<const Key> keys, const Hasher& h, Selector sel) {
    sel.validate(h.params());
    SelectionResult r;
    r.mu = Dyadic{keys.size(), sel.t};
    for (Key k : keys)
        if (sel.selects(h.hash(k), h.params())) r.selected.push_back(k);
    return r;
}

struct BucketDecomposition {
    std::map<std::uint32_t, std::vector<Key>> buckets; // alpha -> X_alpha
    std::uint64_t total = 0;                           // |X|
};

// Bucket of x is the last derived character of x. Requires d >= 1.
BucketDecomposition buckets_by_last_char(const SelectionResult& sel, const TornadoHasher& h);

struct LayerProfile {
    std::vector<std::uint64_t> s; // s[i-1] = S_i, dense up to max_bucket
    std::uint64_t max_bucket = 0;

    std::uint64_t layer(std::uint64_t i) const noexcept { // 1-based, 0 beyond max_bucket
        return (i >= 1 && i <= s.size()) ? s[i - 1] : 0;
    }
    std::uint64_t mass() const noexcept { // sum_i S_i = |X|
        std::uint64_t m = 0;
        for (auto v : s) m += v;
        return m;
    }
};

LayerProfile layer_profile(const BucketDecomposition& b);
LayerProfile layer_profile_from_sizes(std::span<const std::uint64_t> bucket_sizes);

// Experiment-1 fixture: freezes everything except the last top table.
// Per key it keeps (hbar0, hbar1); a trial draws a fresh last table and
// replays the selection, which makes the |X_alpha| independent across alpha.
struct HbarFixture {
    HashParams params;
    Selector selector;
    std::vector<TornadoHasher::Split> splits; // one per input key, input order

    static HbarFixture freeze(const TornadoHasher& h, std::span<const Key> keys, Selector sel);
};

struct CondExpectation {
    std::vector<double> mean_s; // mean_s[i-1] ~ E[S_i | hbar]
    double mean_x = 0;          // ~ E[|X| | hbar]
    std::uint64_t trials = 0;
};

// Monte Carlo: resample only the last top table, `trials` times.
CondExpectation cond_expectation_mc(const HbarFixture& f, std::uint64_t trials, std::uint64_t seed);

// Exact: enumerate the last-table entry per character independently
// (each X_alpha depends only on its own entry). Cost O(|Sigma| + n * 2^range_bits);
// guarded for small ranges.
CondExpectation cond_expectation_exact(const HbarFixture& f);

// One realized trial of the fixture (used by tests; trial 0 of the MC stream).
LayerProfile realize_profile(const HbarFixture& f, std::uint64_t seed, std::uint64_t trial,
                             std::uint64_t* out_x = nullptr);

// CSV emission of layer profiles: header `trial,i,S_i`, one row per nonzero layer.
std::string layer_profiles_csv(std::span<const LayerProfile> profiles);

} // namespace tornadohash
