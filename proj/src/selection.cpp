#include "tornadohash/selection.hpp"

#include <algorithm>
#include <string>

namespace tornadohash {

BucketDecomposition buckets_by_last_char(const SelectionResult& sel, const TornadoHasher& h) {
    if (h.params().d < 1)
        throw std::invalid_argument("buckets_by_last_char: requires d >= 1");
    BucketDecomposition out;
    for (Key k : sel.selected) {
        const DerivedKey dk = h.derive(k);
        out.buckets[dk.chars[dk.len - 1]].push_back(k);
    }
    out.total = sel.selected.size();
    return out;
}

LayerProfile layer_profile_from_sizes(std::span<const std::uint64_t> bucket_sizes) {
    LayerProfile p;
    for (auto s : bucket_sizes) p.max_bucket = std::max(p.max_bucket, s);
    p.s.assign(p.max_bucket, 0);
    // S_i = #buckets of size >= i: histogram then suffix-sum.
    for (auto s : bucket_sizes)
        if (s > 0) ++p.s[s - 1]; // counts buckets of size exactly s, temporarily
    for (std::size_t i = p.s.size(); i-- > 1;) p.s[i - 1] += p.s[i];
    return p;
}

LayerProfile layer_profile(const BucketDecomposition& b) {
    std::vector<std::uint64_t> sizes;
    sizes.reserve(b.buckets.size());
    for (const auto& [alpha, keys] : b.buckets) sizes.push_back(keys.size());
    return layer_profile_from_sizes(sizes);
}

HbarFixture HbarFixture::freeze(const TornadoHasher& h, std::span<const Key> keys, Selector sel) {
    if (h.params().d < 1)
        throw std::invalid_argument("HbarFixture: requires d >= 1");
    sel.validate(h.params());
    HbarFixture f;
    f.params = h.params();
    f.selector = sel;
    f.splits.reserve(keys.size());
    for (Key k : keys) f.splits.push_back(h.split(k));
    return f;
}

namespace {

constexpr std::uint64_t kLastTableStream = 0x7A57;

// Buckets of the fixture grouped by last derived character; each holds the
// hbar0 values of its keys.
struct FixtureBuckets {
    std::vector<std::uint32_t> alphas;
    std::vector<std::vector<std::uint64_t>> hbar0;

    explicit FixtureBuckets(const HbarFixture& f) {
        std::map<std::uint32_t, std::vector<std::uint64_t>> m;
        for (const auto& s : f.splits) m[s.hbar1].push_back(s.hbar0);
        for (auto& [a, v] : m) {
            alphas.push_back(a);
            hbar0.push_back(std::move(v));
        }
    }
};

} // namespace

CondExpectation cond_expectation_mc(const HbarFixture& f, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("cond_expectation_mc: trials must be >= 1");
    const FixtureBuckets fb(f);
    const std::uint64_t rmask = f.params.range_mask();

    std::vector<std::uint64_t> sum_s;
    std::uint64_t sum_x = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<std::uint64_t> sizes(fb.alphas.size(), 0);
        for (std::size_t bi = 0; bi < fb.alphas.size(); ++bi) {
            const std::uint64_t entry =
                stream_word(seed, kLastTableStream + 1 + t, fb.alphas[bi]) & rmask;
            std::uint64_t cnt = 0;
            for (std::uint64_t h0 : fb.hbar0[bi])
                if (f.selector.selects(h0 ^ entry, f.params)) ++cnt;
            sizes[bi] = cnt;
            sum_x += cnt;
        }
        const LayerProfile p = layer_profile_from_sizes(sizes);
        if (p.s.size() > sum_s.size()) sum_s.resize(p.s.size(), 0);
        for (std::size_t i = 0; i < p.s.size(); ++i) sum_s[i] += p.s[i];
    }

    CondExpectation out;
    out.trials = trials;
    out.mean_x = static_cast<double>(sum_x) / static_cast<double>(trials);
    out.mean_s.resize(sum_s.size());
    for (std::size_t i = 0; i < sum_s.size(); ++i)
        out.mean_s[i] = static_cast<double>(sum_s[i]) / static_cast<double>(trials);
    return out;
}

CondExpectation cond_expectation_exact(const HbarFixture& f) {
    if (f.params.range_bits > 20)
        throw std::invalid_argument("cond_expectation_exact: range too large to enumerate");
    const FixtureBuckets fb(f);
    const std::uint64_t range = 1ULL << f.params.range_bits;

    CondExpectation out;
    out.trials = 0; // exact
    double mean_x = 0;
    std::vector<double> mean_s;
    for (std::size_t bi = 0; bi < fb.alphas.size(); ++bi) {
        const auto& keys = fb.hbar0[bi];
        // tail[i] = #entries r with |X_{alpha,r}| >= i+1
        std::vector<std::uint64_t> tail(keys.size(), 0);
        for (std::uint64_t r = 0; r < range; ++r) {
            std::uint64_t cnt = 0;
            for (std::uint64_t h0 : keys)
                if (f.selector.selects(h0 ^ r, f.params)) ++cnt;
            for (std::uint64_t i = 0; i < cnt; ++i) ++tail[i];
        }
        if (tail.size() > mean_s.size()) mean_s.resize(tail.size(), 0.0);
        for (std::size_t i = 0; i < tail.size(); ++i) {
            const double pr = static_cast<double>(tail[i]) / static_cast<double>(range);
            mean_s[i] += pr;
            mean_x += pr;
        }
    }
    while (!mean_s.empty() && mean_s.back() == 0.0) mean_s.pop_back();
    out.mean_x = mean_x;
    out.mean_s = std::move(mean_s);
    return out;
}

LayerProfile realize_profile(const HbarFixture& f, std::uint64_t seed, std::uint64_t trial,
                             std::uint64_t* out_x) {
    const FixtureBuckets fb(f);
    const std::uint64_t rmask = f.params.range_mask();
    std::vector<std::uint64_t> sizes(fb.alphas.size(), 0);
    std::uint64_t x = 0;
    for (std::size_t bi = 0; bi < fb.alphas.size(); ++bi) {
        const std::uint64_t entry =
            stream_word(seed, kLastTableStream + 1 + trial, fb.alphas[bi]) & rmask;
        for (std::uint64_t h0 : fb.hbar0[bi])
            if (f.selector.selects(h0 ^ entry, f.params)) ++sizes[bi];
        x += sizes[bi];
    }
    if (out_x) *out_x = x;
    return layer_profile_from_sizes(sizes);
}

std::string layer_profiles_csv(std::span<const LayerProfile> profiles) {
    std::string out = "trial,i,S_i\n";
    for (std::size_t t = 0; t < profiles.size(); ++t)
        for (std::size_t i = 0; i < profiles[t].s.size(); ++i)
            if (profiles[t].s[i] != 0)
                out += std::to_string(t) + "," + std::to_string(i + 1) + "," +
                       std::to_string(profiles[t].s[i]) + "\n";
    return out;
}

} // namespace tornadohash
