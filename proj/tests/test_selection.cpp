#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "tornadohash/selection.hpp"
#include "tornadohash/stats.hpp"

using namespace tornadohash;

namespace {

std::vector<Key> sequential_keys(std::uint64_t n) {
    std::vector<Key> keys;
    keys.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) keys.push_back(Key{i});
    return keys;
}

} // namespace

TEST_SUITE("selection") {

TEST_CASE("selector validation and degenerate masks") {
    const HashParams p{2, 1, 4, 8};
    const TornadoHasher h(5, p);
    const auto keys = sequential_keys(64);

    const auto all = select(std::span<const Key>(keys), h, Selector{0, 0});
    CHECK(all.selected.size() == keys.size());
    CHECK(all.mu.num == 64);
    CHECK(all.mu.log2_den == 0);

    // t = range_bits selects exactly the keys with hash == mask
    const std::uint64_t v = 0x2A;
    const auto exact = select(std::span<const Key>(keys), h, Selector{8, v});
    for (Key k : keys) {
        const bool in = std::find(exact.selected.begin(), exact.selected.end(), k) !=
                        exact.selected.end();
        CHECK(in == (h.hash(k) == v));
    }

    CHECK_THROWS_AS(select(std::span<const Key>(keys), h, Selector{9, 0}), std::invalid_argument);
    CHECK_THROWS_AS(select(std::span<const Key>(keys), h, Selector{2, 4}), std::invalid_argument);
}

TEST_CASE("selection size concentrates around n / 2^t") {
    const HashParams p{2, 1, 8, 16};
    const std::uint64_t n = 1024;
    const std::uint32_t t = 2;
    const int seeds = 1000;
    // random key set, fixed across seeds
    std::vector<Key> keys;
    SplitMix64 rng(77);
    std::set<std::uint64_t> seen;
    while (keys.size() < n) {
        const std::uint64_t v = rng.next() & 0xFFFF;
        if (seen.insert(v).second) keys.push_back(Key{v});
    }
    double total = 0;
    for (int s = 0; s < seeds; ++s) {
        const TornadoHasher h(1000 + s, p);
        total += static_cast<double>(select(std::span<const Key>(keys), h, Selector{t, 1}).selected.size());
    }
    const double mean = total / seeds;
    const double expect = static_cast<double>(n) / 4.0;
    // binomial standard error of the mean over `seeds` trials
    const double se = std::sqrt(expect * (1.0 - 0.25) / seeds);
    CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("buckets partition the selected set") {
    const HashParams p{2, 2, 4, 8};
    const auto keys = sequential_keys(64);
    for (int inst = 0; inst < 1000; ++inst) {
        const TornadoHasher h(inst, p);
        const auto sel = select(std::span<const Key>(keys), h, Selector{1, 0});
        const auto buckets = buckets_by_last_char(sel, h);
        std::uint64_t mass = 0;
        for (const auto& [alpha, members] : buckets.buckets) {
            CHECK(!members.empty());
            mass += members.size();
            for (Key k : members) {
                const DerivedKey dk = h.derive(k);
                CHECK(dk.chars[dk.len - 1] == alpha);
            }
        }
        CHECK(mass == sel.selected.size());
    }
}

TEST_CASE("bucket edge cases") {
    const HashParams p{2, 1, 4, 8};
    const TornadoHasher h(3, p);
    SelectionResult empty;
    CHECK(buckets_by_last_char(empty, h).buckets.empty());

    SelectionResult single;
    single.selected = {Key{5}};
    const auto b = buckets_by_last_char(single, h);
    CHECK(b.buckets.size() == 1);
    CHECK(b.buckets.begin()->second.size() == 1);

    const TornadoHasher flat(3, HashParams{2, 0, 4, 8});
    CHECK_THROWS_AS(buckets_by_last_char(single, flat), std::invalid_argument);
}

TEST_CASE("layer profile definition and invariants") {
    const std::vector<std::uint64_t> sizes{2, 1};
    const LayerProfile p = layer_profile_from_sizes(sizes);
    CHECK(p.layer(1) == 2);
    CHECK(p.layer(2) == 1);
    CHECK(p.layer(3) == 0);
    CHECK(p.mass() == 3);

    CHECK(layer_profile_from_sizes({}).mass() == 0);

    // random instances: matches a naive double-loop recount, layers monotone,
    // mass equals |X|
    SplitMix64 rng(8);
    for (int inst = 0; inst < 200; ++inst) {
        std::vector<std::uint64_t> bs;
        const std::uint64_t nb = rng.next_below(20);
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < nb; ++i) {
            bs.push_back(rng.next_below(8));
            total += bs.back();
        }
        const LayerProfile prof = layer_profile_from_sizes(bs);
        for (std::uint64_t i = 1; i <= prof.max_bucket + 1; ++i) {
            std::uint64_t naive = 0;
            for (auto s : bs)
                if (s >= i) ++naive;
            CHECK(prof.layer(i) == naive);
            if (i > 1) CHECK(prof.layer(i) <= prof.layer(i - 1));
        }
        CHECK(prof.mass() == total);
    }
}

TEST_CASE("hbar fixture: single trial equals its realized profile") {
    const HashParams p{2, 2, 4, 8};
    const TornadoHasher h(21, p);
    const auto keys = sequential_keys(100);
    const auto fixture = HbarFixture::freeze(h, keys, Selector{2, 1});
    const auto est = cond_expectation_mc(fixture, 1, 555);
    std::uint64_t x = 0;
    const LayerProfile prof = realize_profile(fixture, 555, 0, &x);
    CHECK(est.mean_x == doctest::Approx(static_cast<double>(x)));
    REQUIRE(est.mean_s.size() == prof.s.size());
    for (std::size_t i = 0; i < prof.s.size(); ++i)
        CHECK(est.mean_s[i] == doctest::Approx(static_cast<double>(prof.s[i])));
}

TEST_CASE("experiment 1 preserves the selection mean") {
    const HashParams p{2, 2, 8, 8};
    const TornadoHasher h(2025, p);
    const auto keys = sequential_keys(512);
    const Selector sel{1, 0};
    const auto fixture = HbarFixture::freeze(h, keys, sel);
    const std::uint64_t trials = 10000;
    const auto est = cond_expectation_mc(fixture, trials, 99);
    const double mu = 256.0;
    // standard error from the per-trial variance; |X| | hbar is a sum of
    // independent bucket contributions, variance at most mu
    stats::MeanVar mv;
    for (std::uint64_t t = 0; t < 200; ++t) {
        std::uint64_t x = 0;
        realize_profile(fixture, 99, t, &x);
        mv.add(static_cast<double>(x));
    }
    const double se = std::sqrt(std::max(mv.variance(), 1.0) / static_cast<double>(trials));
    CHECK(std::abs(est.mean_x - mu) <= 4.0 * se);
}

TEST_CASE("exact conditional expectation matches full last-table enumeration") {
    // |Sigma| = 4, range 2 bits: all 2^(2*4) = 256 last tables are enumerable.
    const HashParams p{2, 1, 2, 2};
    const TornadoHasher h(7, p);
    const auto keys = sequential_keys(8);
    const Selector sel{1, 0};
    const auto fixture = HbarFixture::freeze(h, keys, sel);

    const auto exact = cond_expectation_exact(fixture);

    // brute force: enumerate every assignment of the last table
    const std::uint64_t sigma = 4, range = 4;
    std::vector<double> sum_s;
    double sum_x = 0;
    std::uint64_t tables = 0;
    for (std::uint64_t assign = 0; assign < 256; ++assign) {
        std::array<std::uint64_t, 4> table{};
        for (std::uint64_t a = 0; a < sigma; ++a) table[a] = (assign >> (2 * a)) & 3;
        std::map<std::uint32_t, std::uint64_t> bucket;
        for (const auto& s : fixture.splits) {
            const std::uint64_t hv = s.hbar0 ^ table[s.hbar1];
            if (sel.selects(hv, p)) ++bucket[s.hbar1];
        }
        std::vector<std::uint64_t> sizes;
        for (auto& [a, c] : bucket) sizes.push_back(c);
        const LayerProfile prof = layer_profile_from_sizes(sizes);
        if (prof.s.size() > sum_s.size()) sum_s.resize(prof.s.size(), 0.0);
        for (std::size_t i = 0; i < prof.s.size(); ++i) sum_s[i] += static_cast<double>(prof.s[i]);
        sum_x += static_cast<double>(prof.mass());
        ++tables;
    }
    CHECK(exact.mean_x == doctest::Approx(sum_x / tables).epsilon(1e-12));
    REQUIRE(exact.mean_s.size() == sum_s.size());
    for (std::size_t i = 0; i < sum_s.size(); ++i)
        CHECK(exact.mean_s[i] == doctest::Approx(sum_s[i] / tables).epsilon(1e-12));
    (void)range;

    // Monte Carlo resampling agrees with the exact value within 4 sigma
    const auto mc = cond_expectation_mc(fixture, 20000, 123);
    CHECK(std::abs(mc.mean_s[0] - exact.mean_s[0]) <= 4.0 * std::sqrt(4.0 / 20000.0));
}

TEST_CASE("layer profile CSV emission") {
    LayerProfile a;
    a.s = {3, 1};
    LayerProfile b; // empty
    const std::vector<LayerProfile> profs{a, b};
    CHECK(layer_profiles_csv(profs) == "trial,i,S_i\n0,1,3\n0,2,1\n");
}

} // TEST_SUITE
