#include "tornadohash/hashing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tornadohash {
namespace {

// Table-fill stream ids. Layer 0 is the twist function h0, layers 1..d are
// the derived-character functions h~i, layer d+1 is the top table. A stream
// is layer * kStreamStride + position, so distinct tables never collide.
constexpr std::uint64_t kStreamStride = 64;
constexpr std::uint64_t kOracleStream = 0xF1A9;

std::uint64_t table_stream(std::uint32_t layer, std::uint32_t position) {
    return static_cast<std::uint64_t>(layer) * kStreamStride + position;
}

// Rough guard against building hashers whose tables cannot reasonably fit.
constexpr std::uint64_t kMaxTableBytes = 1ULL << 31; // 2 GiB

} // namespace

void HashParams::validate() const {
    if (c < 1) throw std::invalid_argument("HashParams: c must be >= 1");
    if (char_bits < 1) throw std::invalid_argument("HashParams: char_bits must be >= 1");
    if (range_bits < 1 || range_bits > 64)
        throw std::invalid_argument("HashParams: range_bits must be in [1, 64]");
    if (static_cast<std::uint64_t>(c) * char_bits > 64)
        throw std::invalid_argument("HashParams: c * char_bits must be <= 64");
    if (c + d > kMaxDerivedChars)
        throw std::invalid_argument("HashParams: c + d must be <= " + std::to_string(kMaxDerivedChars));
    // Table memory guard; counts one table per (layer, position) pair.
    std::uint64_t tables = (c - 1);
    for (std::uint32_t i = 1; i <= d; ++i) tables += c + i - 1;
    tables += c + d;
    if (char_bits > 28 || tables * (sigma() * 8) > kMaxTableBytes)
        throw std::invalid_argument("HashParams: lookup tables exceed the memory budget");
}

Key make_key(std::span<const std::uint32_t> chars, const HashParams& p) {
    if (chars.size() != p.c) throw std::invalid_argument("make_key: expected c characters");
    std::uint64_t bits = 0;
    for (std::uint32_t i = 0; i < p.c; ++i) {
        if (chars[i] > p.char_mask())
            throw std::invalid_argument("make_key: character out of range");
        bits |= static_cast<std::uint64_t>(chars[i]) << (i * p.char_bits);
    }
    return Key{bits};
}

std::vector<std::uint32_t> key_chars(Key k, const HashParams& p) {
    std::vector<std::uint32_t> out(p.c);
    for (std::uint32_t i = 0; i < p.c; ++i) out[i] = key_char(k, i, p);
    return out;
}

void validate_key(Key k, const HashParams& p) {
    if (p.key_bits() < 64 && (k.bits >> p.key_bits()) != 0)
        throw std::invalid_argument("key has characters outside [0, 2^char_bits)");
}

SimpleTabulation::SimpleTabulation(std::uint64_t seed, HashParams params)
    : params_(params), seed_(seed) {
    params_.validate();
    const std::uint64_t sigma = params_.sigma();
    const std::uint64_t mask = params_.range_mask();
    tables_.resize(params_.c * sigma);
    for (std::uint32_t pos = 0; pos < params_.c; ++pos) {
        std::uint64_t* t = tables_.data() + pos * sigma;
        const std::uint64_t stream = table_stream(0, pos);
        for (std::uint64_t e = 0; e < sigma; ++e) t[e] = stream_word(seed_, stream, e) & mask;
    }
}

std::uint64_t SimpleTabulation::hash(Key k) const {
    validate_key(k, params_);
    const std::uint64_t sigma = params_.sigma();
    std::uint64_t h = 0;
    std::uint64_t bits = k.bits;
    for (std::uint32_t pos = 0; pos < params_.c; ++pos, bits >>= params_.char_bits)
        h ^= tables_[pos * sigma + (bits & params_.char_mask())];
    return h;
}

std::uint64_t SimpleTabulation::hash_chars(std::span<const std::uint32_t> chars) const {
    if (chars.size() != params_.c)
        throw std::invalid_argument("hash_chars: expected c characters");
    const std::uint64_t sigma = params_.sigma();
    std::uint64_t h = 0;
    for (std::uint32_t pos = 0; pos < params_.c; ++pos) {
        if (chars[pos] > params_.char_mask())
            throw std::invalid_argument("hash_chars: character out of range");
        h ^= tables_[pos * sigma + chars[pos]];
    }
    return h;
}

std::span<const std::uint64_t> SimpleTabulation::table(std::uint32_t position) const {
    if (position >= params_.c) throw std::out_of_range("SimpleTabulation::table");
    return {tables_.data() + position * params_.sigma(), params_.sigma()};
}

TornadoHasher::TornadoHasher(std::uint64_t seed, HashParams params)
    : params_(params), seed_(seed) {
    params_.validate();
    const std::uint64_t sigma = params_.sigma();
    const std::uint64_t cmask = params_.char_mask();

    std::size_t char_entries = (params_.c - 1) * sigma;
    derive_offsets_.assign(params_.d + 1, 0);
    for (std::uint32_t i = 1; i <= params_.d; ++i) {
        derive_offsets_[i] = char_entries;
        char_entries += (params_.c + i - 1) * sigma;
    }
    char_tables_.resize(char_entries);

    for (std::uint32_t pos = 0; pos + 1 < params_.c; ++pos) {
        std::uint32_t* t = char_tables_.data() + pos * sigma;
        const std::uint64_t stream = table_stream(0, pos);
        for (std::uint64_t e = 0; e < sigma; ++e)
            t[e] = static_cast<std::uint32_t>(stream_word(seed_, stream, e) & cmask);
    }
    for (std::uint32_t i = 1; i <= params_.d; ++i) {
        for (std::uint32_t pos = 0; pos < params_.c + i - 1; ++pos) {
            std::uint32_t* t = char_tables_.data() + derive_offsets_[i] + pos * sigma;
            const std::uint64_t stream = table_stream(i, pos);
            for (std::uint64_t e = 0; e < sigma; ++e)
                t[e] = static_cast<std::uint32_t>(stream_word(seed_, stream, e) & cmask);
        }
    }

    const std::uint64_t rmask = params_.range_mask();
    const std::uint32_t nd = params_.derived_chars();
    top_tables_.resize(static_cast<std::size_t>(nd) * sigma);
    for (std::uint32_t pos = 0; pos < nd; ++pos) {
        std::uint64_t* t = top_tables_.data() + static_cast<std::size_t>(pos) * sigma;
        const std::uint64_t stream = table_stream(params_.d + 1, pos);
        for (std::uint64_t e = 0; e < sigma; ++e) t[e] = stream_word(seed_, stream, e) & rmask;
    }
}

DerivedKey TornadoHasher::derive(Key k) const {
    validate_key(k, params_);
    const std::uint64_t sigma = params_.sigma();
    DerivedKey dk;
    dk.len = params_.derived_chars();
    std::uint64_t bits = k.bits;
    for (std::uint32_t i = 0; i < params_.c; ++i, bits >>= params_.char_bits)
        dk.chars[i] = static_cast<std::uint32_t>(bits & params_.char_mask());

    // Twist: position c-1 gets XORed with h0 over positions 0..c-2.
    std::uint32_t twist = 0;
    for (std::uint32_t pos = 0; pos + 1 < params_.c; ++pos)
        twist ^= char_tables_[pos * sigma + dk.chars[pos]];
    dk.chars[params_.c - 1] ^= twist;

    for (std::uint32_t i = 1; i <= params_.d; ++i) {
        const std::uint32_t* block = char_tables_.data() + derive_offsets_[i];
        std::uint32_t v = 0;
        for (std::uint32_t pos = 0; pos < params_.c + i - 1; ++pos)
            v ^= block[pos * sigma + dk.chars[pos]];
        dk.chars[params_.c + i - 1] = v;
    }
    return dk;
}

std::uint64_t TornadoHasher::hash(Key k) const {
    const DerivedKey dk = derive(k);
    const std::uint64_t sigma = params_.sigma();
    std::uint64_t h = 0;
    for (std::uint32_t pos = 0; pos < dk.len; ++pos)
        h ^= top_tables_[static_cast<std::size_t>(pos) * sigma + dk.chars[pos]];
    return h;
}

TornadoHasher::Split TornadoHasher::split(Key k) const {
    if (params_.d < 1)
        throw std::invalid_argument("tornado split requires d >= 1");
    const DerivedKey dk = derive(k);
    const std::uint64_t sigma = params_.sigma();
    std::uint64_t h = 0;
    for (std::uint32_t pos = 0; pos + 1 < dk.len; ++pos)
        h ^= top_tables_[static_cast<std::size_t>(pos) * sigma + dk.chars[pos]];
    return Split{h, dk.chars[dk.len - 1]};
}

std::span<const std::uint32_t> TornadoHasher::twist_table(std::uint32_t position) const {
    if (position + 1 >= params_.c) throw std::out_of_range("twist_table position");
    return {char_tables_.data() + position * params_.sigma(), params_.sigma()};
}

std::span<const std::uint32_t> TornadoHasher::derive_table(std::uint32_t i, std::uint32_t position) const {
    if (i < 1 || i > params_.d) throw std::out_of_range("derive_table index");
    if (position >= params_.c + i - 1) throw std::out_of_range("derive_table position");
    return {char_tables_.data() + derive_offsets_[i] + position * params_.sigma(), params_.sigma()};
}

std::span<const std::uint64_t> TornadoHasher::top_table(std::uint32_t position) const {
    if (position >= params_.derived_chars()) throw std::out_of_range("top_table position");
    return {top_tables_.data() + static_cast<std::size_t>(position) * params_.sigma(), params_.sigma()};
}

RandomOracle::RandomOracle(std::uint64_t seed, HashParams params)
    : params_(params), seed_(seed) {
    params_.validate();
}

std::uint64_t RandomOracle::hash(Key k) const {
    validate_key(k, params_);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(k.bits);
    if (it != memo_.end()) return it->second;
    const std::uint64_t v = stream_word(seed_, kOracleStream, mix64(k.bits)) & params_.range_mask();
    memo_.emplace(k.bits, v);
    return v;
}

std::size_t RandomOracle::memo_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
}

} // namespace tornadohash
