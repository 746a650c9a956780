#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "salma/analysis.hpp"
#include "salma/simgen.hpp"

using namespace salma;

TEST_CASE("frequency indicator of zeros") {
    const auto plan = StftPlan::create(8, 16, 64);
    const auto p = frequency_indicator(Spectrogram(plan), 1000.0);
    CHECK(p.values.size() == 9);
    for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("frequency indicator of a single atom") {
    const auto plan = StftPlan::create(8, 16, 64);
    Spectrogram c(plan);
    c.at(5, 3) = {2.0, 0.0};
    const auto p = frequency_indicator(c, 1600.0);
    CHECK(p.step == Catch::Approx(100.0));
    for (std::size_t k = 0; k < p.values.size(); ++k)
        CHECK(p.values[k] == (k == 5 ? 2.0 : 0.0));
    const auto peaks = top_peaks(p, 3);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].location == Catch::Approx(500.0));
}

TEST_CASE("frequency indicator is invariant under frame reordering") {
    std::mt19937 rng(1);
    const auto plan = StftPlan::create(8, 16, 64);
    auto c = oracle::random_spectrogram(plan, rng);
    const auto p1 = frequency_indicator(c, 1.0);

    // Reverse the frames in place.
    for (int m2 = 0; m2 < c.cols / 2; ++m2)
        for (int m1 = 0; m1 < c.rows; ++m1)
            std::swap(c.at(m1, m2), c.at(m1, c.cols - 1 - m2));
    const auto p2 = frequency_indicator(c, 1.0);
    for (std::size_t k = 0; k < p1.values.size(); ++k)
        CHECK(p1.values[k] == Catch::Approx(p2.values[k]).margin(1e-12));
}

TEST_CASE("smoothed profile with unit filter is the raw frame sum") {
    std::mt19937 rng(2);
    const auto plan = StftPlan::create(8, 16, 64);
    const auto c = oracle::random_spectrogram(plan, rng);
    const auto p = smoothed_profile(c, 1, 1000.0);
    for (int m2 = 0; m2 < c.cols; ++m2) {
        double s = 0.0;
        for (int m1 = 0; m1 < c.rows; ++m1) s += std::abs(c.at(m1, m2));
        CHECK(p.values[m2] == Catch::Approx(s).margin(1e-12));
    }
}

TEST_CASE("smoothed profile of zeros and parameter checks") {
    const auto plan = StftPlan::create(8, 16, 64);
    const auto p = smoothed_profile(Spectrogram(plan), 3, 1.0);
    for (double v : p.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(smoothed_profile(Spectrogram(plan), 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothed_profile(Spectrogram(plan), 0, 1.0), std::invalid_argument);
}

TEST_CASE("smoothing approximately preserves total mass") {
    std::mt19937 rng(3);
    const auto plan = StftPlan::create(8, 16, 256);
    const auto c = oracle::random_spectrogram(plan, rng);
    const int lpf_len = 5;
    const auto raw = smoothed_profile(c, 1, 1.0);
    const auto smooth = smoothed_profile(c, lpf_len, 1.0);
    double sum_raw = 0.0, sum_smooth = 0.0, max_raw = 0.0;
    for (double v : raw.values) {
        sum_raw += v;
        max_raw = std::max(max_raw, v);
    }
    for (double v : smooth.values) sum_smooth += v;
    CHECK(std::abs(sum_raw - sum_smooth) <= lpf_len * max_raw);
}

TEST_CASE("envelope spectrum of a pure tone is flat") {
    TimeSignal x;
    x.fs = 8000.0;
    x.samples.resize(4000);
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = std::sin(2.0 * std::numbers::pi * 500.0 * n / x.fs);
    const auto p = envelope_spectrum(x);
    double peak_off_dc = 0.0;
    for (std::size_t k = 1; k < p.values.size(); ++k)
        peak_off_dc = std::max(peak_off_dc, p.values[k]);
    // Envelope is ~1 everywhere; residual ripple comes from edge effects.
    CHECK(peak_off_dc < 0.02 * x.size());
}

TEST_CASE("envelope spectrum of the clean train peaks at 100 Hz and harmonics") {
    SimSpec spec;
    spec.noise_sigma = 0.0;
    const auto [clean, _] = generate(spec);
    const auto p = envelope_spectrum(clean);
    const double hz = p.step;

    const auto peaks = top_peaks(p, 4);
    REQUIRE(!peaks.empty());
    CHECK(std::abs(peaks[0].location - 100.0) <= hz + 1e-9);

    bool found200 = false, found300 = false;
    for (const auto& pk : peaks) {
        if (std::abs(pk.location - 200.0) <= hz + 1e-9) found200 = true;
        if (std::abs(pk.location - 300.0) <= hz + 1e-9) found300 = true;
    }
    CHECK(found200);
    CHECK(found300);
}

TEST_CASE("envelope spectrum of zeros is zero") {
    const TimeSignal x(std::vector<double>(256, 0.0), 1.0);
    const auto p = envelope_spectrum(x);
    for (double v : p.values) CHECK(v == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("negation leaves the envelope spectrum unchanged") {
    std::mt19937 rng(5);
    auto x = oracle::random_signal(512, rng);
    auto neg = x;
    for (auto& v : neg.samples) v = -v;
    const auto p1 = envelope_spectrum(x);
    const auto p2 = envelope_spectrum(neg);
    for (std::size_t k = 0; k < p1.values.size(); ++k)
        CHECK(p1.values[k] == Catch::Approx(p2.values[k]).margin(1e-9));
}

TEST_CASE("top_peaks of a zero profile is empty") {
    Profile p;
    p.step = 1.0;
    p.values.assign(64, 0.0);
    CHECK(top_peaks(p, 5).empty());
}
