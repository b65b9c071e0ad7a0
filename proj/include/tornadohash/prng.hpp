#pragma once
// Counter-mode pseudo-random streams used to fill lookup tables and derive
// per-trial seeds. Every value is a pure function of
// (seed, stream, counter), so tables are reproducible and independent of
// fill order, and distinct tables never share a substream.
//
// The mixer is the SplitMix64 output function (Steele, Lea, Flood 2014),
// applied twice over the combined inputs.

#include <cstdint>

namespace tornadohash {

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One 64-bit word of the stream `stream` under `seed`, at position `counter`.
inline constexpr std::uint64_t stream_word(std::uint64_t seed, std::uint64_t stream,
                                           std::uint64_t counter) noexcept {
    std::uint64_t x = mix64(seed + kGolden64 * (stream + 1));
    return mix64(x ^ (counter + 0x632BE59BD9B4E019ULL));
}

// Seed for trial `trial` of experiment `experiment_id` under `master_seed`.
// Experiment ids are fixed small integers (see harness.hpp); no two trials
// of the same run share a hasher seed.
inline constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t experiment_id,
                                          std::uint64_t trial) noexcept {
    return stream_word(master_seed, experiment_id, trial);
}

// Small sequential generator for test/utility code (not used for tables).
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    constexpr std::uint64_t next() noexcept { return mix64(state_ += kGolden64); }
    // uniform value in [0, bound) by rejection-free multiply-shift
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }
    double next_unit() noexcept { return (next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace tornadohash
