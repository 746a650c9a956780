#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "salma/mask.hpp"
#include "salma/signal.hpp"

namespace salma {

/// Robust noise-level estimate: median(|y - median(y)|) / 0.6745.
inline double estimate_noise(const TimeSignal& y) {
    if (y.samples.empty()) throw std::invalid_argument("estimate_noise: empty signal");

    auto median = [](std::vector<double> v) {
        const std::size_t n = v.size();
        auto mid = v.begin() + n / 2;
        std::nth_element(v.begin(), mid, v.end());
        if (n % 2 == 1) return *mid;
        const double hi = *mid;
        const double lo = *std::max_element(v.begin(), mid);
        return 0.5 * (lo + hi);
    };

    const double med = median(y.samples);
    std::vector<double> dev(y.samples.size());
    for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(y.samples[i] - med);
    return median(std::move(dev)) / 0.6745;
}

/// Calibrated factors eta for lambda = eta * sigma, valid for K1 = N1 = 2.
struct EtaEntry {
    int R;
    int L;
    int M;
    double eta;
};

inline constexpr std::array<EtaEntry, 8> kEtaTable = {{
    {16, 64, 4, 0.120},
    {16, 64, 8, 0.060},
    {16, 128, 4, 0.085},
    {16, 128, 8, 0.060},
    {32, 128, 4, 0.120},
    {32, 128, 8, 0.065},
    {32, 256, 4, 0.090},
    {32, 256, 8, 0.060},
}};

/// Regularization weight lambda = eta(R, L, M) * sigma.  Triples outside
/// the table are rejected; there is no calibrated interpolation rule, so
/// callers must supply lambda manually in that case.
inline double select_lambda(int R, int L, int M, double sigma) {
    for (const auto& e : kEtaTable)
        if (e.R == R && e.L == L && e.M == M) return e.eta * sigma;

    const EtaEntry* nearest = &kEtaTable[0];
    double best = 1e300;
    for (const auto& e : kEtaTable) {
        const double dist = std::abs(std::log2(double(e.R)) - std::log2(double(R))) +
                            std::abs(std::log2(double(e.L)) - std::log2(double(L))) +
                            std::abs(std::log2(double(e.M)) - std::log2(double(M)));
        if (dist < best) {
            best = dist;
            nearest = &e;
        }
    }
    throw std::invalid_argument(
        "no calibrated eta factor for R=" + std::to_string(R) + ", L=" + std::to_string(L) +
        ", M=" + std::to_string(M) + "; nearest calibrated setting is R=" +
        std::to_string(nearest->R) + ", L=" + std::to_string(nearest->L) +
        ", M=" + std::to_string(nearest->M) + " (or pass lambda explicitly)");
}

/// Admissible upper bound of the non-convexity parameter: 1 / (lambda * K),
/// where K is the number of ones in the mask.
inline double max_nonconvexity(double lambda, const BinaryMask& B) {
    if (lambda <= 0.0) throw std::invalid_argument("max_nonconvexity: lambda must be > 0");
    if (B.ones_count < 1) throw std::invalid_argument("max_nonconvexity: empty mask");
    return 1.0 / (lambda * B.ones_count);
}

/// Default 6-stage continuation schedule {0, a_max/5, ..., a_max}.
inline std::vector<double> continuation_schedule(double a_max, int stages = 6) {
    if (stages < 2 || a_max <= 0.0) return {0.0};
    std::vector<double> s(stages);
    for (int i = 0; i < stages; ++i) s[i] = a_max * i / (stages - 1);
    return s;
}

}  // namespace salma
