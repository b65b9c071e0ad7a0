#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

namespace tornadohash::stats {

// 99% two-sided Wilson score interval for a binomial proportion.
struct Wilson {
    double freq = 0;
    double low = 0;
    double high = 0;
    double half_width = 0;
};

inline Wilson wilson99(std::uint64_t hits, std::uint64_t trials) {
    constexpr double z = 2.5758293035489004; // Phi^-1(0.995)
    Wilson w;
    if (trials == 0) {
        w.low = 0;
        w.high = 1;
        w.half_width = 0.5;
        return w;
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2n = z * z / n;
    const double center = (p + z2n / 2.0) / (1.0 + z2n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
    w.freq = p;
    w.low = std::max(0.0, center - half);
    w.high = std::min(1.0, center + half);
    w.half_width = half;
    return w;
}

struct MeanVar {
    std::uint64_t n = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double std_error() const { return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0; }
};

} // namespace tornadohash::stats
