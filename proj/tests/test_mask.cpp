#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "salma/mask.hpp"

using namespace salma;

TEST_CASE("figure example mask: M=4, K1=4, N0=4, N1=2") {
    const auto B = build_mask({4, 2, 4, 4});
    CHECK(B.rows == 4);
    CHECK(B.cols == 20);
    CHECK(B.ones_count == 4 * 4 * 2);
    for (int k1 = 0; k1 < 4; ++k1)
        for (int k2 = 0; k2 < 20; ++k2)
            CHECK(int(B.at(k1, k2)) == (k2 % 6 < 2 ? 1 : 0));
}

TEST_CASE("mask of 2x32 from period of 10 frames spanning 4 periods") {
    const auto B = build_mask({2, 2, 8, 4});
    CHECK(B.rows == 2);
    CHECK(B.cols == 32);
    CHECK(B.ones_count == 2 * 4 * 2);
}

TEST_CASE("single period is all ones") {
    const auto B = build_mask({3, 5, 7, 1});
    CHECK(B.rows == 3);
    CHECK(B.cols == 5);
    for (auto v : B.grid) CHECK(int(v) == 1);
}

TEST_CASE("invalid dimensions rejected") {
    CHECK_THROWS_AS(build_mask({0, 2, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(build_mask({2, 0, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(build_mask({2, 2, -1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(build_mask({2, 2, 4, 0}), std::invalid_argument);
}

TEST_CASE("period rounding uses round-half-up") {
    // 2*T*fs/R = 10 exactly.
    CHECK(MaskParams::period_in_frames(0.010, 16000.0, 32) == 10);
    // 2*0.0105*16000/32 = 10.5 -> 11.
    CHECK(MaskParams::period_in_frames(0.0105, 16000.0, 32) == 11);
    CHECK_THROWS_AS(MaskParams::from_period(1e-5, 16000.0, 32, 2, 2, 4),
                    std::invalid_argument);
}

TEST_CASE("group_norm of zeros is zero") {
    const auto plan = StftPlan::create(8, 16, 64);
    const Spectrogram c(plan);
    const auto B = build_mask({2, 2, 3, 2});
    for (int m1 = -B.rows + 1; m1 < c.rows; ++m1)
        for (int m2 = -B.cols + 1; m2 < c.cols; ++m2)
            CHECK(group_norm(c, B, m1, m2) == 0.0);
}

TEST_CASE("singleton mask gives the modulus") {
    std::mt19937 rng(4);
    const auto plan = StftPlan::create(8, 16, 64);
    const auto c = oracle::random_spectrogram(plan, rng);
    const auto B = build_mask({1, 1, 0, 1});
    for (int m1 = 0; m1 < c.rows; ++m1)
        for (int m2 = 0; m2 < c.cols; ++m2)
            CHECK(group_norm(c, B, m1, m2) ==
                  Catch::Approx(std::abs(c.at(m1, m2))).margin(1e-15));
}

TEST_CASE("group_norm matches the naive double loop everywhere") {
    std::mt19937 rng(6);
    const auto plan = StftPlan::create(4, 6, 18);  // 6x10 grid
    const auto c = oracle::random_spectrogram(plan, rng);
    REQUIRE(c.rows == 6);
    REQUIRE(c.cols == 10);
    const auto B = build_mask({2, 2, 3, 2});  // 2x5, the small example pattern
    for (int m1 = -B.rows + 1; m1 < c.rows + 2; ++m1)
        for (int m2 = -B.cols + 1; m2 < c.cols + 2; ++m2)
            CHECK(group_norm(c, B, m1, m2) ==
                  Catch::Approx(oracle::group_norm_naive(c, B, m1, m2)).margin(1e-12));
}

TEST_CASE("real/imag split of the squared group norm") {
    std::mt19937 rng(8);
    const auto plan = StftPlan::create(4, 8, 24);
    const auto c = oracle::random_spectrogram(plan, rng);
    const auto B = build_mask({2, 2, 3, 2});

    Spectrogram cr(plan), ci(plan);
    for (std::size_t i = 0; i < c.size(); ++i) {
        cr.coeffs[i] = c.coeffs[i].real();
        ci.coeffs[i] = c.coeffs[i].imag();
    }
    for (int m1 = -1; m1 < c.rows; ++m1) {
        for (int m2 = -4; m2 < c.cols; ++m2) {
            const double full = group_norm(c, B, m1, m2);
            const double re = group_norm(cr, B, m1, m2);
            const double im = group_norm(ci, B, m1, m2);
            CHECK(full * full == Catch::Approx(re * re + im * im).margin(1e-12));
        }
    }
}

TEST_CASE("adding a one never decreases the group norm") {
    std::mt19937 rng(10);
    const auto plan = StftPlan::create(4, 8, 24);
    const auto c = oracle::random_spectrogram(plan, rng);

    auto B = build_mask({2, 2, 3, 2});
    auto B_more = B;
    // Flip one zero to one.
    for (int k2 = 0; k2 < B.cols; ++k2) {
        if (!B_more.at(0, k2)) {
            B_more.grid[k2] = 1;
            B_more.ones.emplace_back(0, k2);
            B_more.ones_count++;
            break;
        }
    }
    for (int m1 = -1; m1 < c.rows; ++m1)
        for (int m2 = -4; m2 < c.cols; ++m2)
            CHECK(group_norm(c, B_more, m1, m2) >= group_norm(c, B, m1, m2) - 1e-15);
}

TEST_CASE("translation covariance in the interior") {
    std::mt19937 rng(12);
    const auto plan = StftPlan::create(4, 8, 24);
    const auto c = oracle::random_spectrogram(plan, rng);
    const auto B = build_mask({2, 2, 1, 2});

    // Shift c by (1, 2) with zero fill; interior group norms shift along.
    Spectrogram shifted(plan);
    for (int m1 = 1; m1 < c.rows; ++m1)
        for (int m2 = 2; m2 < c.cols; ++m2)
            shifted.at(m1, m2) = c.at(m1 - 1, m2 - 2);

    for (int m1 = 0; m1 + B.rows <= c.rows - 1; ++m1)
        for (int m2 = 0; m2 + B.cols <= c.cols - 2; ++m2)
            CHECK(group_norm(shifted, B, m1 + 1, m2 + 2) ==
                  Catch::Approx(group_norm(c, B, m1, m2)).margin(1e-13));
}
