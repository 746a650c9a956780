#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "salma/mask.hpp"
#include "salma/penalty.hpp"
#include "salma/signal.hpp"
#include "salma/stft.hpp"

namespace salma {

/// Solver configuration.  The continuation schedule lists the non-convexity
/// parameter per stage; a single entry runs one stage at that value.
struct SolverConfig {
    double lambda = 1.0;
    double mu = 1.0;
    int max_iters = 200;
    double tol = 1e-8;
    std::vector<double> continuation = {0.0};

    void validate() const {
        if (lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
        if (mu <= 0.0) throw std::invalid_argument("mu must be > 0");
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
        if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
        if (continuation.empty())
            throw std::invalid_argument("continuation schedule must be non-empty");
        for (std::size_t i = 1; i < continuation.size(); ++i)
            if (continuation[i] < continuation[i - 1])
                throw std::invalid_argument("continuation schedule must be non-decreasing");
        if (continuation.size() > 1 && continuation.front() != 0.0)
            throw std::invalid_argument("continuation schedule must start at a = 0");
    }
};

struct IterRecord {
    int stage = 0;
    double a = 0.0;
    double objective = 0.0;
    double primal_residual = 0.0;      ///< ||u - c||_2
    double primal_residual_rel = 0.0;  ///< ||u - c||_2 / ||c||_2
};

struct ExtractionResult {
    Spectrogram coeffs;
    TimeSignal xhat;
    std::vector<IterRecord> history;
    bool converged = false;
    double final_residual = 0.0;
    SolverConfig config;
};

namespace detail {

/// Group norms over every anchor where the mask overlaps the grid at all:
/// m1 in [-(K1-1), M1-1], m2 in [-(K2-1), M2-1].
struct AnchorField {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int m1, int m2) const {
        return values[static_cast<size_t>(m1 - row0) * cols + (m2 - col0)];
    }
    double& at(int m1, int m2) {
        return values[static_cast<size_t>(m1 - row0) * cols + (m2 - col0)];
    }
};

inline AnchorField group_norm_field(const Spectrogram& v, const BinaryMask& B) {
    AnchorField f;
    f.row0 = -(B.rows - 1);
    f.col0 = -(B.cols - 1);
    f.rows = v.rows + B.rows - 1;
    f.cols = v.cols + B.cols - 1;
    f.values.assign(static_cast<size_t>(f.rows) * f.cols, 0.0);

    std::vector<double> mod2(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mod2[i] = std::norm(v.coeffs[i]);

    for (int m1 = f.row0; m1 < v.rows; ++m1) {
        for (int m2 = f.col0; m2 < v.cols; ++m2) {
            double acc = 0.0;
            for (const auto& [k1, k2] : B.ones) {
                const int i = m1 + k1;
                const int j = m2 + k2;
                if (i < 0 || i >= v.rows || j < 0 || j >= v.cols) continue;
                acc += mod2[static_cast<size_t>(j) * v.rows + i];
            }
            f.at(m1, m2) = std::sqrt(acc);
        }
    }
    return f;
}

}  // namespace detail

/// Full objective P(c) = 1/2 ||y - Ac||^2 + lambda * sum phi_eps(bnorm).
inline double objective(const Spectrogram& c, const TimeSignal& y, const BinaryMask& B,
                        const PenaltySpec& spec, double lambda) {
    if (static_cast<int>(y.size()) != c.plan.signal_len)
        throw std::invalid_argument("objective: signal/plan length mismatch");
    const auto synth = detail::synthesize(c);
    double data = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) data += std::norm(y[n] - synth[n]);

    const auto gn = detail::group_norm_field(c, B);
    double reg = 0.0;
    for (double g : gn.values) reg += phi_eps(g, spec);
    return 0.5 * data + lambda * reg;
}

/// Majorizer weight field [r(v)]_{m1,m2} =
/// sum_{k1,k2} B[k1,k2]^2 / psi(bnorm(v, B, m1-k1, m2-k2)).
inline std::vector<double> r_field(const Spectrogram& v, const BinaryMask& B,
                                   const PenaltySpec& spec) {
    auto gn = detail::group_norm_field(v, B);
    for (double& g : gn.values) g = 1.0 / psi(g, spec);

    std::vector<double> r(v.size());
    for (int m2 = 0; m2 < v.cols; ++m2) {
        for (int m1 = 0; m1 < v.rows; ++m1) {
            double acc = 0.0;
            for (const auto& [k1, k2] : B.ones) acc += gn.at(m1 - k1, m2 - k2);
            r[static_cast<size_t>(m2) * v.rows + m1] = acc;
        }
    }
    return r;
}

/// u = (c + d) ./ [1 + lambda * r / mu]; pointwise complex shrinkage.
inline Spectrogram u_update(const Spectrogram& c, const Spectrogram& d,
                            const std::vector<double>& r, double lambda, double mu) {
    if (!c.same_shape(d) || r.size() != c.size())
        throw std::invalid_argument("u_update: shape mismatch");
    Spectrogram u(c.plan);
    for (std::size_t i = 0; i < c.size(); ++i)
        u.coeffs[i] = (c.coeffs[i] + d.coeffs[i]) / (1.0 + lambda * r[i] / mu);
    return u;
}

/// c = (u - d) + 1/(mu+1) * A^H [y - A(u - d)]; the exact minimizer of
/// 1/2 ||y - Ac||^2 + mu/2 ||u - c - d||^2 under the tight-frame identity.
inline Spectrogram c_update(const Spectrogram& u, const Spectrogram& d,
                            const TimeSignal& y, double mu) {
    if (!u.same_shape(d))
        throw std::invalid_argument("c_update: shape mismatch");
    if (static_cast<int>(y.size()) != u.plan.signal_len)
        throw std::invalid_argument("c_update: signal/plan length mismatch");

    Spectrogram t(u.plan);
    for (std::size_t i = 0; i < u.size(); ++i) t.coeffs[i] = u.coeffs[i] - d.coeffs[i];

    auto synth = detail::synthesize(t);
    std::vector<std::complex<double>> resid(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) resid[n] = y[n] - synth[n];
    Spectrogram corr = detail::analyze(resid.data(), t.plan);

    const double w = 1.0 / (mu + 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) t.coeffs[i] += w * corr.coeffs[i];
    return t;
}

/// Run the split-Lagrangian MM iteration, optionally over a non-convexity
/// continuation schedule with warm starts between stages.
inline ExtractionResult solve(const TimeSignal& y, const StftPlan& plan, const BinaryMask& B,
                              const PenaltySpec& spec, const SolverConfig& cfg,
                              std::optional<Spectrogram> init = std::nullopt) {
    cfg.validate();
    spec.validate();
    if (static_cast<int>(y.size()) != plan.signal_len)
        throw std::invalid_argument("solve: signal length does not match plan");
    if (spec.family == PenaltyFamily::Abs) {
        for (double a : cfg.continuation)
            if (a != 0.0)
                throw std::invalid_argument("abs penalty admits only a = 0 stages");
    }

    Spectrogram c = init ? *init : forward(y, plan);
    if (init && !init->same_shape(Spectrogram(plan)))
        throw std::invalid_argument("solve: init spectrogram shape mismatch");
    Spectrogram u = c;
    Spectrogram d(plan);

    ExtractionResult result;
    result.config = cfg;

    bool stage_converged = false;
    double final_res_rel = 0.0;
    for (std::size_t stage = 0; stage < cfg.continuation.size(); ++stage) {
        PenaltySpec stage_spec = spec;
        stage_spec.a = cfg.continuation[stage];

        stage_converged = false;
        double prev_obj = 0.0;
        bool have_prev = false;
        for (int it = 0; it < cfg.max_iters; ++it) {
            const auto r = r_field(u, B, stage_spec);
            u = u_update(c, d, r, cfg.lambda, cfg.mu);
            c = c_update(u, d, y, cfg.mu);
            for (std::size_t i = 0; i < d.size(); ++i)
                d.coeffs[i] -= u.coeffs[i] - c.coeffs[i];

            double res2 = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                res2 += std::norm(u.coeffs[i] - c.coeffs[i]);
            const double res = std::sqrt(res2);
            const double cn = std::sqrt(energy(c));
            const double res_rel = res / std::max(cn, 1e-300);
            const double obj = objective(c, y, B, stage_spec, cfg.lambda);
            result.history.push_back({static_cast<int>(stage), stage_spec.a, obj, res, res_rel});

            const double obj_change =
                have_prev ? std::abs(obj - prev_obj) / std::max(std::abs(obj), 1e-300) : 1.0;
            prev_obj = obj;
            have_prev = true;
            final_res_rel = res_rel;
            if (res_rel <= cfg.tol && obj_change <= cfg.tol) {
                stage_converged = true;
                break;
            }
        }
    }

    result.converged = stage_converged;
    result.final_residual = final_res_rel;
    result.coeffs = std::move(c);
    result.xhat = inverse(result.coeffs, y.fs);
    return result;
}

}  // namespace salma
