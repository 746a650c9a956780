#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "salma/fft.hpp"
#include "salma/signal.hpp"

namespace salma {

/// Framing and window of a Parseval-normalized STFT pair.
///
/// The analysis operator and the synthesis operator share one window,
/// normalized so that the squared windows of overlapping frames sum to 1
/// at every covered sample.  With that normalization synthesis is the
/// exact adjoint of analysis and synthesis∘analysis is the identity.
struct StftPlan {
    int window_len = 0;  ///< R, even
    int hop = 0;         ///< R/2
    int fft_len = 0;     ///< L >= R
    int signal_len = 0;  ///< N
    std::vector<double> window;

    static StftPlan create(int window_len, int fft_len, int signal_len) {
        if (window_len < 2 || window_len % 2 != 0)
            throw std::invalid_argument("window length must be even and >= 2");
        if (fft_len < window_len)
            throw std::invalid_argument("fft length must be >= window length");
        if (signal_len < 1)
            throw std::invalid_argument("signal length must be positive");

        StftPlan plan;
        plan.window_len = window_len;
        plan.hop = window_len / 2;
        plan.fft_len = fft_len;
        plan.signal_len = signal_len;

        // Squared-sine base window, then per-phase normalization so the
        // two frames overlapping each sample satisfy w^2[n] + w^2[n+hop] = 1.
        const int R = window_len;
        std::vector<double> base(R);
        for (int n = 0; n < R; ++n) {
            const double s = std::sin(std::numbers::pi * (n + 0.5) / R);
            base[n] = s * s;
        }
        plan.window.resize(R);
        for (int n = 0; n < R; ++n) {
            const int p = n % plan.hop;
            const double denom =
                std::sqrt(base[p] * base[p] + base[p + plan.hop] * base[p + plan.hop]);
            plan.window[n] = base[n] / denom;
        }
        return plan;
    }

    int num_frames() const {
        return (signal_len + hop - 1) / hop + 1;
    }

    /// Length of the internally zero-padded signal (hop samples of lead-in,
    /// plus tail padding so the last frame fits).
    int padded_len() const { return (num_frames() - 1) * hop + window_len; }

    bool operator==(const StftPlan& o) const {
        return window_len == o.window_len && hop == o.hop && fft_len == o.fft_len &&
               signal_len == o.signal_len;
    }
};

/// Complex M1 x M2 STFT coefficient grid (M1 = fft bins, M2 = frames).
struct Spectrogram {
    int rows = 0;  ///< M1 = fft_len
    int cols = 0;  ///< M2 = frame count
    std::vector<std::complex<double>> coeffs;  ///< frame-major: coeffs[m2*rows + m1]
    StftPlan plan;

    Spectrogram() = default;
    explicit Spectrogram(const StftPlan& p)
        : rows(p.fft_len),
          cols(p.num_frames()),
          coeffs(static_cast<size_t>(p.fft_len) * p.num_frames()),
          plan(p) {}

    std::complex<double>& at(int m1, int m2) {
        return coeffs[static_cast<size_t>(m2) * rows + m1];
    }
    std::complex<double> at(int m1, int m2) const {
        return coeffs[static_cast<size_t>(m2) * rows + m1];
    }
    std::size_t size() const { return coeffs.size(); }

    bool same_shape(const Spectrogram& o) const {
        return rows == o.rows && cols == o.cols && plan == o.plan;
    }
};

inline double energy(const Spectrogram& c) {
    double e = 0.0;
    for (const auto& v : c.coeffs) e += std::norm(v);
    return e;
}

namespace detail {

/// Analysis on a complex signal of length plan.signal_len.
inline Spectrogram analyze(const std::complex<double>* x, const StftPlan& plan) {
    const int R = plan.window_len;
    const int L = plan.fft_len;
    const int H = plan.hop;
    const int N = plan.signal_len;
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));

    std::vector<std::complex<double>> padded(plan.padded_len());
    std::copy(x, x + N, padded.begin() + H);

    Spectrogram c(plan);
    std::vector<std::complex<double>> frame(L);
    std::vector<std::complex<double>> spec(L);
    auto& engine = FftEngine::instance();
    for (int t = 0; t < c.cols; ++t) {
        const int offset = t * H;
        for (int n = 0; n < R; ++n) frame[n] = plan.window[n] * padded[offset + n];
        std::fill(frame.begin() + R, frame.end(), std::complex<double>(0.0));
        engine.fft(frame.data(), spec.data(), L);
        for (int m1 = 0; m1 < L; ++m1) c.at(m1, t) = scale * spec[m1];
    }
    return c;
}

/// Synthesis (the adjoint of analyze); complex output of length signal_len.
inline std::vector<std::complex<double>> synthesize(const Spectrogram& c) {
    const StftPlan& plan = c.plan;
    const int R = plan.window_len;
    const int L = plan.fft_len;
    const int H = plan.hop;
    const int N = plan.signal_len;
    if (c.rows != L || c.cols != plan.num_frames())
        throw std::invalid_argument("spectrogram shape does not match its plan");
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));

    std::vector<std::complex<double>> padded(plan.padded_len());
    std::vector<std::complex<double>> spec(L);
    std::vector<std::complex<double>> frame(L);
    auto& engine = FftEngine::instance();
    for (int t = 0; t < c.cols; ++t) {
        for (int m1 = 0; m1 < L; ++m1) spec[m1] = c.at(m1, t);
        engine.ifft_unscaled(spec.data(), frame.data(), L);
        const int offset = t * H;
        for (int n = 0; n < R; ++n) padded[offset + n] += scale * plan.window[n] * frame[n];
    }
    return {padded.begin() + H, padded.begin() + H + N};
}

}  // namespace detail

/// Forward STFT of a real signal.
inline Spectrogram forward(const TimeSignal& x, const StftPlan& plan) {
    if (static_cast<int>(x.size()) != plan.signal_len)
        throw std::invalid_argument("signal length does not match plan");
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = x[i];
    return detail::analyze(cx.data(), plan);
}

/// Inverse STFT.  For conjugate-symmetric grids the imaginary part of the
/// synthesis vanishes; the real part is returned.
inline TimeSignal inverse(const Spectrogram& c, double fs = 1.0) {
    auto full = detail::synthesize(c);
    TimeSignal x;
    x.fs = fs;
    x.samples.resize(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) x.samples[i] = full[i].real();
    return x;
}

}  // namespace salma
