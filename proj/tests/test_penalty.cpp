#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "salma/penalty.hpp"

using namespace salma;

namespace {
const std::vector<PenaltyFamily> kNonConvex = {PenaltyFamily::Log, PenaltyFamily::Rat,
                                               PenaltyFamily::Atan};
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((PenaltySpec{PenaltyFamily::Abs, 0.0, 0.0}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((PenaltySpec{PenaltyFamily::Log, -1.0, 1e-8}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((PenaltySpec{PenaltyFamily::Abs, 0.5, 1e-8}.validate()),
                    std::invalid_argument);
    CHECK_NOTHROW((PenaltySpec{PenaltyFamily::Atan, 0.5, 1e-8}.validate()));
}

TEST_CASE("phi_eps closed forms") {
    CHECK(phi_eps(3.0, {PenaltyFamily::Abs, 0.0, 1e-8}) ==
          Catch::Approx(std::sqrt(9.0 + 1e-8)).epsilon(1e-15));
    CHECK(phi_eps(0.0, {PenaltyFamily::Log, 1.0, 1e-8}) ==
          Catch::Approx(std::log(1.0 + 1e-4)).epsilon(1e-12));

    // atan family against a direct evaluation of the tabulated expression.
    const double u = 0.5, a = 1.0, eps = 0.01;
    const double s = std::sqrt(u * u + eps);
    const double direct = 2.0 / (a * std::sqrt(3.0)) *
                          (std::atan((1.0 + 2.0 * a * s) / std::sqrt(3.0)) -
                           std::numbers::pi / 6.0);
    CHECK(phi_eps(u, {PenaltyFamily::Atan, a, eps}) == Catch::Approx(direct).epsilon(1e-13));
}

TEST_CASE("psi closed forms") {
    CHECK(psi(0.0, {PenaltyFamily::Abs, 0.0, 1e-8}) == Catch::Approx(1e-4).epsilon(1e-14));

    // log family in the eps -> 0 limit: sqrt(1) * (1 + 2*1) = 3.
    CHECK(psi(1.0, {PenaltyFamily::Log, 2.0, 0.0}) == Catch::Approx(3.0).epsilon(1e-14));

    const double u = 0.5, eps = 0.01;
    const double s = std::sqrt(u * u + eps);
    CHECK(psi(u, {PenaltyFamily::Atan, 1.0, eps}) ==
          Catch::Approx(s * (1.0 + s + s * s)).epsilon(1e-14));
    CHECK(psi(u, {PenaltyFamily::Rat, 1.0, eps}) ==
          Catch::Approx(s * (1.0 + s / 2.0) * (1.0 + s / 2.0)).epsilon(1e-14));
}

TEST_CASE("psi is strictly positive") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u_dist(-10.0, 10.0);
    for (auto family : {PenaltyFamily::Abs, PenaltyFamily::Log, PenaltyFamily::Rat,
                        PenaltyFamily::Atan}) {
        const double a = family == PenaltyFamily::Abs ? 0.0 : 0.7;
        const PenaltySpec spec{family, a, 1e-8};
        CHECK(psi(0.0, spec) > 0.0);
        for (int i = 0; i < 100; ++i) CHECK(psi(u_dist(rng), spec) > 0.0);
    }
}

TEST_CASE("majorizer touches at u = v") {
    const PenaltySpec spec{PenaltyFamily::Atan, 1.0, 0.01};
    CHECK(majorizer_value(0.5, 0.5, spec) == Catch::Approx(phi_eps(0.5, spec)).margin(1e-14));
}

TEST_CASE("majorizer dominates at the origin") {
    const PenaltySpec spec{PenaltyFamily::Log, 2.0, 1e-8};
    for (double v : {0.1, -0.7, 3.0}) {
        const double g0 = majorizer_value(0.0, v, spec);
        CHECK(g0 == Catch::Approx(phi_eps(v, spec) - v * v / (2.0 * psi(v, spec)))
                        .margin(1e-14));
        CHECK(g0 >= phi_eps(0.0, spec) - 1e-12);
    }
}

TEST_CASE("randomized dominance sweep") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_real_distribution<double> a_dist(0.0, 2.0);
    for (auto family : kNonConvex) {
        for (int i = 0; i < 1000; ++i) {
            const PenaltySpec spec{family, a_dist(rng), 1e-8};
            const double u = val(rng), v = val(rng);
            CHECK(majorizer_value(u, v, spec) - phi_eps(u, spec) >= -1e-12);
            CHECK(std::abs(majorizer_value(v, v, spec) - phi_eps(v, spec)) <= 1e-12);
        }
    }
}

TEST_CASE("even symmetry") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> val(0.0, 10.0);
    for (auto family : {PenaltyFamily::Abs, PenaltyFamily::Log, PenaltyFamily::Rat,
                        PenaltyFamily::Atan}) {
        const double a = family == PenaltyFamily::Abs ? 0.0 : 1.3;
        const PenaltySpec spec{family, a, 1e-8};
        for (int i = 0; i < 50; ++i) {
            const double u = val(rng);
            CHECK(phi_eps(u, spec) == phi_eps(-u, spec));
        }
    }
}

TEST_CASE("degeneration to abs as a -> 0") {
    const PenaltySpec abs_spec{PenaltyFamily::Abs, 0.0, 1e-8};
    for (auto family : kNonConvex) {
        const PenaltySpec spec{family, 1e-10, 1e-8};
        for (double u : {0.0, 0.3, 1.0, 7.5}) {
            CHECK(phi_eps(u, spec) ==
                  Catch::Approx(phi_eps(u, abs_spec)).epsilon(1e-6));
            CHECK(psi(u, spec) == Catch::Approx(psi(u, abs_spec)).epsilon(1e-6));
        }
    }
}

TEST_CASE("psi times the derivative recovers u") {
    // Central finite difference on phi_eps; eps large enough for stable
    // differencing at the chosen step.
    const double h = 1e-6;
    for (auto family : {PenaltyFamily::Abs, PenaltyFamily::Log, PenaltyFamily::Rat,
                        PenaltyFamily::Atan}) {
        const double a = family == PenaltyFamily::Abs ? 0.0 : 0.8;
        const PenaltySpec spec{family, a, 1e-4};
        for (double u : {0.05, 0.5, 2.0, -1.5}) {
            const double deriv = (phi_eps(u + h, spec) - phi_eps(u - h, spec)) / (2.0 * h);
            CHECK(psi(u, spec) * deriv == Catch::Approx(u).epsilon(1e-5));
        }
    }
}
