#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace salma {

/// Sparsity-promoting penalty families.  All are concave in |u| and reduce
/// to the absolute value as the non-convexity parameter a goes to 0.
enum class PenaltyFamily { Abs, Log, Rat, Atan };

inline PenaltyFamily penalty_family_from_string(const std::string& s) {
    if (s == "abs") return PenaltyFamily::Abs;
    if (s == "log") return PenaltyFamily::Log;
    if (s == "rat") return PenaltyFamily::Rat;
    if (s == "atan") return PenaltyFamily::Atan;
    throw std::invalid_argument("unknown penalty family: " + s);
}

inline std::string to_string(PenaltyFamily f) {
    switch (f) {
        case PenaltyFamily::Abs: return "abs";
        case PenaltyFamily::Log: return "log";
        case PenaltyFamily::Rat: return "rat";
        case PenaltyFamily::Atan: return "atan";
    }
    return "?";
}

/// Smoothed penalty specification: family, non-convexity a, smoothing eps.
struct PenaltySpec {
    PenaltyFamily family = PenaltyFamily::Abs;
    double a = 0.0;
    double eps = 1e-8;

    void validate() const {
        if (eps <= 0.0) throw std::invalid_argument("penalty eps must be > 0");
        if (a < 0.0) throw std::invalid_argument("penalty a must be >= 0");
        if (family == PenaltyFamily::Abs && a != 0.0)
            throw std::invalid_argument("abs penalty requires a = 0");
    }
};

/// Smoothed penalty phi_eps(u; a) = phi(sqrt(u^2 + eps); a).
inline double phi_eps(double u, const PenaltySpec& spec) {
    const double s = std::sqrt(u * u + spec.eps);
    const double a = spec.a;
    if (a == 0.0) return s;
    switch (spec.family) {
        case PenaltyFamily::Abs:
            return s;
        case PenaltyFamily::Log:
            return std::log1p(a * s) / a;
        case PenaltyFamily::Rat:
            return s / (1.0 + a * s / 2.0);
        case PenaltyFamily::Atan: {
            // 2/(a*sqrt(3)) * [atan((1+2as)/sqrt(3)) - pi/6], rewritten via
            // atan(p) - atan(q) = atan((p-q)/(1+pq)) to stay stable as a -> 0.
            const double sqrt3 = std::sqrt(3.0);
            return 2.0 / (a * sqrt3) * std::atan(sqrt3 * a * s / (2.0 + a * s));
        }
    }
    return s;
}

/// psi(u) = u / phi_eps'(u; a); strictly positive for all real u.
inline double psi(double u, const PenaltySpec& spec) {
    const double s2 = u * u + spec.eps;
    const double s = std::sqrt(s2);
    const double a = spec.a;
    if (a == 0.0) return s;
    switch (spec.family) {
        case PenaltyFamily::Abs:
            return s;
        case PenaltyFamily::Log:
            return s * (1.0 + a * s);
        case PenaltyFamily::Rat: {
            const double t = 1.0 + a * s / 2.0;
            return s * t * t;
        }
        case PenaltyFamily::Atan:
            return s * (1.0 + a * s + a * a * s2);
    }
    return s;
}

/// Quadratic majorizer g(u, v) of phi_eps, touching at u = v.
inline double majorizer_value(double u, double v, const PenaltySpec& spec) {
    const double pv = psi(v, spec);
    return u * u / (2.0 * pv) + (phi_eps(v, spec) - v * v / (2.0 * pv));
}

}  // namespace salma
