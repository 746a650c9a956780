#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "salma/fft.hpp"
#include "salma/signal.hpp"
#include "salma/stft.hpp"

namespace salma {

/// Non-negative 1-D profile with a uniform axis (Hz or seconds per step).
struct Profile {
    std::vector<double> values;
    double step = 1.0;       ///< axis increment per entry
    std::string axis_unit;   ///< "Hz" or "s"

    double axis(std::size_t i) const { return step * static_cast<double>(i); }
};

struct Peak {
    double location = 0.0;  ///< in axis units
    double value = 0.0;
};

/// Per-bin sum of |c| over frames; one-sided frequency axis in Hz.
inline Profile frequency_indicator(const Spectrogram& c, double fs) {
    Profile p;
    p.axis_unit = "Hz";
    p.step = fs / c.rows;
    p.values.assign(static_cast<size_t>(c.rows) / 2 + 1, 0.0);
    for (int m2 = 0; m2 < c.cols; ++m2)
        for (std::size_t m1 = 0; m1 < p.values.size(); ++m1)
            p.values[m1] += std::abs(c.at(static_cast<int>(m1), m2));
    return p;
}

/// Per-frame sum of |c| over bins, smoothed with a zero-phase moving
/// average of odd length lpf_len (1 = no smoothing).
inline Profile smoothed_profile(const Spectrogram& c, int lpf_len, double fs) {
    if (lpf_len < 1 || lpf_len % 2 == 0)
        throw std::invalid_argument("smoothed_profile: lpf_len must be odd and >= 1");
    std::vector<double> raw(c.cols, 0.0);
    for (int m2 = 0; m2 < c.cols; ++m2)
        for (int m1 = 0; m1 < c.rows; ++m1) raw[m2] += std::abs(c.at(m1, m2));

    Profile p;
    p.axis_unit = "s";
    p.step = c.plan.hop / fs;
    p.values.assign(raw.size(), 0.0);
    const int half = lpf_len / 2;
    for (int m2 = 0; m2 < c.cols; ++m2) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            const int k = m2 + j;
            if (k >= 0 && k < c.cols) acc += raw[k];
        }
        p.values[m2] = acc / lpf_len;
    }
    return p;
}

/// Discrete analytic signal x + i*H{x} via the frequency-domain
/// construction (negative frequencies zeroed, positive doubled).
inline std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("analytic_signal: empty input");
    std::vector<std::complex<double>> buf(x.begin(), x.end());
    auto spec = detail::fft(buf);
    for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    return detail::ifft(spec);
}

/// Magnitude spectrum of the analytic-signal envelope, mean removed before
/// the FFT; one-sided axis in Hz.
inline Profile envelope_spectrum(const TimeSignal& x) {
    if (x.samples.empty()) throw std::invalid_argument("envelope_spectrum: empty input");
    auto a = analytic_signal(x.samples);
    std::vector<double> env(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        env[i] = std::abs(a[i]);
        mean += env[i];
    }
    mean /= static_cast<double>(env.size());

    std::vector<std::complex<double>> buf(env.size());
    for (std::size_t i = 0; i < env.size(); ++i) buf[i] = env[i] - mean;
    auto spec = detail::fft(buf);

    Profile p;
    p.axis_unit = "Hz";
    p.step = x.fs / static_cast<double>(env.size());
    p.values.assign(env.size() / 2 + 1, 0.0);
    for (std::size_t k = 0; k < p.values.size(); ++k) p.values[k] = std::abs(spec[k]);
    return p;
}

/// Local maxima of a profile sorted by height, largest first.  The DC
/// entry is excluded when skip_dc is set.
inline std::vector<Peak> top_peaks(const Profile& p, int k, bool skip_dc = true) {
    std::vector<Peak> peaks;
    const std::size_t n = p.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (skip_dc && i == 0) continue;
        const double left = i > 0 ? p.values[i - 1] : -1.0;
        const double right = i + 1 < n ? p.values[i + 1] : -1.0;
        if (p.values[i] > left && p.values[i] >= right && p.values[i] > 0.0)
            peaks.push_back({p.axis(i), p.values[i]});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.value > b.value; });
    if (static_cast<int>(peaks.size()) > k) peaks.resize(k);
    return peaks;
}

}  // namespace salma
