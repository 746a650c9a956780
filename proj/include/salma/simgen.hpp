#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "salma/signal.hpp"

namespace salma {

/// Synthetic test-signal description: a periodic train of multi-tone
/// oscillatory transients buried in white Gaussian noise.
struct SimSpec {
    double fs = 16000.0;          ///< sample rate, Hz
    double duration = 0.25;       ///< seconds
    double period = 0.010;        ///< transient repetition period, seconds
    double transient_len = 0.004; ///< seconds
    std::vector<double> tones = {1000.0, 2000.0};  ///< Hz
    double amp_low = 150.0;       ///< per-transient amplitude range
    double amp_high = 450.0;
    double noise_sigma = 150.0;
    double onset_jitter = 0.0;    ///< seconds, uniform +-jitter per onset
    unsigned int seed = 18;

    void validate() const {
        if (fs <= 0.0 || duration <= 0.0 || period <= 0.0)
            throw std::invalid_argument("simgen: fs, duration, period must be > 0");
        if (transient_len <= 0.0 || transient_len >= period)
            throw std::invalid_argument("simgen: transient length must be in (0, period)");
        if (amp_low < 0.0 || amp_high < amp_low)
            throw std::invalid_argument("simgen: bad amplitude range");
        if (noise_sigma < 0.0) throw std::invalid_argument("simgen: sigma must be >= 0");
        for (double f : tones)
            if (f <= 0.0 || f >= fs / 2.0)
                throw std::invalid_argument("simgen: tones must lie in (0, fs/2)");
    }

    int num_samples() const { return static_cast<int>(std::lround(duration * fs)); }
};

/// Generate the (clean, noisy) pair.  Each transient carries every tone
/// with an independent uniform phase, a shared uniform amplitude, and an
/// exponentially decaying envelope that falls to 5% of peak at
/// transient_len.  Reproducible from the seed.
inline std::pair<TimeSignal, TimeSignal> generate(const SimSpec& spec) {
    spec.validate();

    const int n = spec.num_samples();
    const int period_samples = static_cast<int>(std::lround(spec.period * spec.fs));
    const int len = static_cast<int>(std::lround(spec.transient_len * spec.fs));
    const double tau = len / std::log(20.0);  // envelope decay, samples

    std::mt19937 rng(spec.seed);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> amp_dist(spec.amp_low, spec.amp_high);
    std::uniform_real_distribution<double> jitter_dist(-spec.onset_jitter, spec.onset_jitter);

    TimeSignal clean(std::vector<double>(n, 0.0), spec.fs);
    for (int onset = 0; onset < n; onset += period_samples) {
        int start = onset;
        if (spec.onset_jitter > 0.0)
            start += static_cast<int>(std::lround(jitter_dist(rng) * spec.fs));

        const double amp = amp_dist(rng);
        std::vector<double> phases(spec.tones.size());
        for (auto& p : phases) p = phase_dist(rng);

        for (int m = 0; m < len && start + m < n; ++m) {
            if (start + m < 0) continue;
            const double env = std::exp(-m / tau);
            double s = 0.0;
            for (std::size_t t = 0; t < spec.tones.size(); ++t)
                s += std::sin(2.0 * std::numbers::pi * spec.tones[t] * m / spec.fs + phases[t]);
            clean[start + m] += amp * env * s;
        }
    }

    TimeSignal noisy = clean;
    if (spec.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (auto& v : noisy.samples) v += noise(rng);
    }
    return {std::move(clean), std::move(noisy)};
}

}  // namespace salma
