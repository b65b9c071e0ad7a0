#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tornadohash {

// Exact dyadic rational num / 2^log2_den in [0,1].
// Used for expected selection sizes (mu = n / 2^t) and sampling thresholds,
// so bound inputs and threshold comparisons stay exact.
struct Dyadic {
    std::uint64_t num = 0;
    std::uint32_t log2_den = 0;

    long double value() const noexcept {
        // num may exceed the unit interval for mu = n / 2^t with t small.
        return std::ldexp(static_cast<long double>(num), -static_cast<int>(log2_den));
    }

    // num * 2^(shift - log2_den) as a 128-bit integer; requires shift >= log2_den.
    unsigned __int128 scaled(std::uint32_t shift) const {
        if (shift < log2_den)
            throw std::invalid_argument("dyadic: not representable at " + std::to_string(shift) + " bits");
        return static_cast<unsigned __int128>(num) << (shift - log2_den);
    }

    bool operator==(const Dyadic&) const = default;
};

} // namespace tornadohash
