#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace salma {

/// Real-valued sampled waveform with its sample rate.
struct TimeSignal {
    std::vector<double> samples;
    double fs = 1.0;

    TimeSignal() = default;
    TimeSignal(std::vector<double> s, double sample_rate)
        : samples(std::move(s)), fs(sample_rate) {}

    std::size_t size() const { return samples.size(); }
    double& operator[](std::size_t i) { return samples[i]; }
    double operator[](std::size_t i) const { return samples[i]; }
};

inline double energy(const TimeSignal& x) {
    double e = 0.0;
    for (double v : x.samples) e += v * v;
    return e;
}

inline double rmse(const TimeSignal& a, const TimeSignal& b) {
    double e = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        e += d * d;
    }
    return std::sqrt(e / static_cast<double>(n));
}

inline double max_abs(const TimeSignal& x) {
    double m = 0.0;
    for (double v : x.samples) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace salma
