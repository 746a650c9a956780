#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "salma/stft.hpp"

namespace salma {

/// Parameters of the periodic binary weight block.
struct MaskParams {
    int K1 = 2;  ///< frequency span (bins)
    int N1 = 2;  ///< ones-run length (frames)
    int N0 = 0;  ///< zeros-run length (frames)
    int M = 4;   ///< number of periods spanned

    void validate() const {
        if (K1 < 1 || N1 < 1 || M < 1)
            throw std::invalid_argument("mask dimensions must be positive");
        if (N0 < 0) throw std::invalid_argument("mask zeros-run must be >= 0");
    }

    /// One fault period measured in STFT frames: round(2*T*fs/R), half-up.
    static int period_in_frames(double fault_period_s, double fs, int window_len) {
        return static_cast<int>(std::floor(2.0 * fault_period_s * fs / window_len + 0.5));
    }

    /// Build params from a fault period; N0 = period_in_frames - N1.
    static MaskParams from_period(double fault_period_s, double fs, int window_len,
                                  int K1, int N1, int M) {
        const int p = period_in_frames(fault_period_s, fs, window_len);
        if (p < N1)
            throw std::invalid_argument(
                "fault period too short for the requested ones-run (N0+N1 < N1)");
        MaskParams mp{K1, N1, p - N1, M};
        mp.validate();
        return mp;
    }
};

/// K1 x K2 {0,1} grid: M all-ones blocks of width N1 separated by M-1
/// all-zeros blocks of width N0, constant along the frequency axis.
struct BinaryMask {
    int rows = 0;  ///< K1
    int cols = 0;  ///< K2 = (N0+N1)(M-1) + N1
    std::vector<std::uint8_t> grid;                 ///< row-major
    std::vector<std::pair<int, int>> ones;          ///< (k1, k2) of nonzeros
    int ones_count = 0;                             ///< K

    std::uint8_t at(int k1, int k2) const {
        return grid[static_cast<size_t>(k1) * cols + k2];
    }
};

inline BinaryMask build_mask(const MaskParams& p) {
    p.validate();
    BinaryMask b;
    b.rows = p.K1;
    b.cols = (p.N0 + p.N1) * (p.M - 1) + p.N1;
    b.grid.assign(static_cast<size_t>(b.rows) * b.cols, 0);
    for (int k1 = 0; k1 < b.rows; ++k1) {
        for (int k2 = 0; k2 < b.cols; ++k2) {
            if (k2 % (p.N0 + p.N1) < p.N1) {
                b.grid[static_cast<size_t>(k1) * b.cols + k2] = 1;
                b.ones.emplace_back(k1, k2);
            }
        }
    }
    b.ones_count = static_cast<int>(b.ones.size());
    return b;
}

/// Weighted norm of the K1 x K2 segment of c anchored at (m1, m2):
/// sqrt( sum_{k1,k2} B[k1,k2] |c[m1+k1, m2+k2]|^2 ).  Positions outside
/// the grid contribute zero, so anchors may overhang (and be negative).
inline double group_norm(const Spectrogram& c, const BinaryMask& B, int m1, int m2) {
    double acc = 0.0;
    for (const auto& [k1, k2] : B.ones) {
        const int i = m1 + k1;
        const int j = m2 + k2;
        if (i < 0 || i >= c.rows || j < 0 || j >= c.cols) continue;
        acc += std::norm(c.at(i, j));
    }
    return std::sqrt(acc);
}

}  // namespace salma
