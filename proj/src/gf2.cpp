#include "tornadohash/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace tornadohash::gf2 {
namespace {

std::uint64_t encode(PositionChar pc) noexcept {
    return (static_cast<std::uint64_t>(pc.position) << 32) | pc.character;
}

GeneralizedKey normalize(GeneralizedKey g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

} // namespace

GeneralizedKey to_generalized(std::span<const std::uint32_t> chars) {
    GeneralizedKey g;
    g.reserve(chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i)
        g.push_back({static_cast<std::uint32_t>(i + 1), chars[i]});
    return g;
}

GeneralizedKey to_generalized(Key k, const HashParams& p) {
    const auto chars = key_chars(k, p);
    return to_generalized(std::span<const std::uint32_t>(chars));
}

GeneralizedKey to_generalized(const DerivedKey& dk) { return to_generalized(dk.view()); }

GeneralizedKey sym_diff(const KeyFamily& family) {
    std::unordered_map<std::uint64_t, std::uint32_t> count;
    for (const auto& g : family.members)
        for (PositionChar pc : normalize(g)) ++count[encode(pc)];
    GeneralizedKey out;
    for (const auto& [code, c] : count)
        if (c % 2 == 1)
            out.push_back({static_cast<std::uint32_t>(code >> 32),
                           static_cast<std::uint32_t>(code & 0xFFFFFFFFu)});
    std::sort(out.begin(), out.end());
    return out;
}

bool is_zero_set(const KeyFamily& family) { return sym_diff(family).empty(); }

IndependenceResult is_linearly_independent(const KeyFamily& family) {
    const std::size_t k = family.members.size();
    IndependenceResult res;
    if (k == 0) return res;

    // Duplicate members are a zero pair and settle the question immediately.
    {
        std::vector<std::pair<GeneralizedKey, std::size_t>> sorted;
        sorted.reserve(k);
        for (std::size_t i = 0; i < k; ++i) sorted.emplace_back(normalize(family.members[i]), i);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < k; ++i)
            if (sorted[i].first == sorted[i - 1].first) {
                res.independent = false;
                res.witness = {sorted[i - 1].second, sorted[i].second};
                std::sort(res.witness.begin(), res.witness.end());
                return res;
            }
    }

    // Columns indexed by the position characters actually present.
    std::unordered_map<std::uint64_t, std::uint32_t> col_of;
    std::vector<GeneralizedKey> rows_pc(k);
    for (std::size_t i = 0; i < k; ++i) {
        rows_pc[i] = normalize(family.members[i]);
        for (PositionChar pc : rows_pc[i]) col_of.emplace(encode(pc), 0);
    }
    std::uint32_t ncols = 0;
    for (auto& [code, idx] : col_of) idx = ncols++;

    const std::size_t words = (ncols + 63) / 64;
    const std::size_t track_words = (k + 63) / 64;
    // Row layout: [incidence bits | tracking bits], tracking starts as identity.
    std::vector<std::uint64_t> mat(k * (words + track_words), 0);
    auto row = [&](std::size_t r) { return mat.data() + r * (words + track_words); };
    for (std::size_t r = 0; r < k; ++r) {
        for (PositionChar pc : rows_pc[r]) {
            const std::uint32_t c = col_of[encode(pc)];
            row(r)[c / 64] ^= 1ULL << (c % 64);
        }
        row(r)[words + r / 64] ^= 1ULL << (r % 64);
    }

    std::vector<std::int64_t> pivot_row(ncols, -1);
    for (std::size_t r = 0; r < k; ++r) {
        std::uint64_t* rr = row(r);
        // Reduce against existing pivots until a fresh pivot or a zero row.
        while (true) {
            std::int64_t lead = -1;
            for (std::size_t w = 0; w < words; ++w)
                if (rr[w]) {
                    lead = static_cast<std::int64_t>(w * 64 + std::countr_zero(rr[w]));
                    break;
                }
            if (lead < 0) {
                // Zero row: the tracking bits name a zero subfamily.
                res.independent = false;
                for (std::size_t i = 0; i < k; ++i)
                    if (rr[words + i / 64] & (1ULL << (i % 64))) res.witness.push_back(i);
                return res;
            }
            const std::int64_t p = pivot_row[static_cast<std::size_t>(lead)];
            if (p < 0) {
                pivot_row[static_cast<std::size_t>(lead)] = static_cast<std::int64_t>(r);
                break;
            }
            const std::uint64_t* pr = row(static_cast<std::size_t>(p));
            for (std::size_t w = 0; w < words + track_words; ++w) rr[w] ^= pr[w];
        }
    }
    return res;
}

IndependenceResult derived_independent(const TornadoHasher& h, std::span<const Key> keys,
                                       bool prefix_only) {
    KeyFamily fam;
    fam.members.reserve(keys.size());
    const std::uint32_t len = h.params().derived_chars() - (prefix_only ? 1 : 0);
    for (Key k : keys) {
        const DerivedKey dk = h.derive(k);
        fam.members.push_back(to_generalized(dk.prefix(len)));
    }
    return is_linearly_independent(fam);
}

std::uint64_t count_zero_ktuples(std::span<const GeneralizedKey> S, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("count_zero_ktuples: k must be >= 1");
    const std::uint64_t n = S.size();
    if (n == 0) return 0;
    // Explosion guard: n^k <= 1e8.
    double total = 1;
    for (std::uint32_t i = 0; i < k; ++i) total *= static_cast<double>(n);
    if (total > 1e8)
        throw std::invalid_argument("count_zero_ktuples: |S|^k exceeds the enumeration guard");

    std::vector<GeneralizedKey> members(S.begin(), S.end());
    for (auto& g : members) g = normalize(g);

    std::unordered_set<std::uint64_t> odd;
    std::uint64_t count = 0;
    auto toggle = [&](const GeneralizedKey& g) {
        for (PositionChar pc : g) {
            const std::uint64_t code = encode(pc);
            auto it = odd.find(code);
            if (it == odd.end())
                odd.insert(code);
            else
                odd.erase(it);
        }
    };
    // DFS over ordered tuples with incremental symmetric difference.
    auto rec = [&](auto&& self, std::uint32_t depth) -> void {
        if (depth == k) {
            if (odd.empty()) ++count;
            return;
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            toggle(members[i]);
            self(self, depth + 1);
            toggle(members[i]);
        }
    };
    rec(rec, 0);
    return count;
}

boost::multiprecision::cpp_int zero_bound(std::uint64_t n, std::uint32_t c, std::uint32_t k) {
    if (k < 2) throw std::invalid_argument("zero_bound: k must be >= 2");
    namespace mp = boost::multiprecision;
    mp::cpp_int b = mp::pow(mp::cpp_int(3), c);
    b *= mp::pow(mp::cpp_int(n), k - 2);
    return b;
}

} // namespace tornadohash::gf2
