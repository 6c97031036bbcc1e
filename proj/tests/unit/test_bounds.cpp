#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eulerlab/bounds.hpp"
#include "eulerlab/quadrature.hpp"

using namespace eulerlab;

// Reference values computed with 30-digit arithmetic.
TEST(Theorem5Bound, PinnedValue) {
    EXPECT_NEAR(bound_theorem5(1.0 / 22.0), 1.2538309014103606e-13, 1e-13 * 1.2538309014103606e-13);
    const double l = std::log(22.0);
    EXPECT_DOUBLE_EQ(bound_theorem5(1.0 / 22.0), std::exp(-14.0 * std::cbrt(l * l)));
}

TEST(Theorem5Bound, DomainErrors) {
    EXPECT_THROW(bound_theorem5(0.0), DomainError);
    EXPECT_THROW(bound_theorem5(-0.01), DomainError);
    EXPECT_THROW(bound_theorem5(1.0 / 22.0 * (1 + 1e-15)), DomainError);
    EXPECT_THROW(bound_theorem5(0.25), DomainError);
    EXPECT_THROW(bound_theorem5(NAN), DomainError);
    EXPECT_NO_THROW(theorem5_rhs(0.0625));
    EXPECT_THROW(theorem5_rhs(1.0), DomainError);
    EXPECT_THROW(log_theorem5_rhs(0.0), DomainError);
}

TEST(Theorem5Bound, PositiveAndMonotone) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> e(-30.0, std::log2(1.0 / 22.0));
    for (int i = 0; i < 1000; ++i) {
        const double h = std::exp2(e(gen));
        EXPECT_GT(bound_theorem5(h), 0.0);
        EXPECT_LT(bound_theorem5(h / 2.0), bound_theorem5(h));
        EXPECT_NEAR(log_theorem5_rhs(std::log(h)), std::log(bound_theorem5(h)), 1e-12);
    }
}

// ln(bound / h^alpha) = -14 L^{2/3} + alpha L with L = |ln h|; it increases only
// once L > (28 / (3 alpha))^3, which for alpha = 0.05 is k ~ 9.4e6 halvings.
TEST(Theorem5Bound, RatioToPowerDecreasesOnDyadicRangeAndTurnsUpFarBeyond) {
    const double alpha = 0.05;
    auto log_ratio = [&](double k) {
        const double log_h = -k * std::numbers::ln2;
        return log_theorem5_rhs(log_h) - alpha * log_h;
    };
    for (int k = 2; k <= 40; ++k) EXPECT_LT(log_ratio(k), log_ratio(k - 1)) << k;
    const double turn = std::pow(28.0 / (3.0 * alpha), 3) / std::numbers::ln2;
    EXPECT_GT(turn, 9.3e6);
    EXPECT_LT(turn, 9.5e6);
    for (double k = 1e7; k < 1e12; k *= 2) EXPECT_GT(log_ratio(2 * k), log_ratio(k)) << k;
    EXPECT_GT(log_ratio(1e12), 0.0);
}

TEST(Lemma33First, ExampleAndDomain) {
    const double hmax = std::numbers::pi / 2.0 * std::exp(-1.0);
    EXPECT_DOUBLE_EQ(lemma33_h_max(1.0, 0.0), hmax);
    EXPECT_NEAR(bound_lemma33_first(1.0, 0.0, hmax), std::exp(-8.0), 1e-15 * std::exp(-8.0));
    EXPECT_DOUBLE_EQ(lemma33_h_max(1.0, -2.0), std::numbers::pi / 2.0);
    EXPECT_THROW(bound_lemma33_first(1.0, 0.0, hmax * 1.001), DomainError);
    EXPECT_THROW(bound_lemma33_first(0.0, 0.0, 1e-3), DomainError);
    EXPECT_THROW(bound_lemma33_first(1.0, 0.0, 0.0), DomainError);
    EXPECT_THROW(bound_lemma33_first(1.0, NAN, 1e-3), DomainError);
}

TEST(Lemma33First, DecreasingInAbsX) {
    const double h = 1e-12;  // admissible for every (t, x) below
    for (double t : {0.5, 1.0, 2.0}) {
        double prev = INFINITY;
        for (double ax : {0.0, 0.25, 0.5, 1.0, 1.5}) {
            const double b = bound_lemma33_first(t, ax, h);
            EXPECT_DOUBLE_EQ(b, bound_lemma33_first(t, -ax, h));
            EXPECT_LT(b, prev);
            EXPECT_GT(b, 0.0);
            prev = b;
        }
    }
}

TEST(Lemma33Second, TailFactorClosedFormAgreesWithOracles) {
    const double closed = tail_factor_full_line();
    EXPECT_DOUBLE_EQ(closed, std::pow(1.0 + 144.0, -0.5));
    const auto mc = gaussian_expectation_mc([](double z) { return std::exp(-72.0 * z * z); },
                                            1.0, 1'000'000, {72, 0});
    EXPECT_NEAR(mc.mean, closed, 3.0 * mc.std_error);
    const double quad = composite_simpson(
        [](double z) {
            return std::exp(-72.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        },
        -10.0, 10.0, 1 << 16).value;
    EXPECT_NEAR(quad, closed, 1e-12);
}

TEST(Lemma33Second, ValueAndDomain) {
    const double tf = tail_factor_full_line();
    const double h = 1e-3;
    const double l = std::log(std::numbers::pi / (2.0 * h));
    EXPECT_NEAR(bound_lemma33_second(1.0, 0.0, h, tf),
                tf / 3.0 * std::exp(-72.0 * std::cbrt(l * l)),
                1e-13 * bound_lemma33_second(1.0, 0.0, h, tf));
    EXPECT_THROW(bound_lemma33_second(1.0, 0.0, h, 1.5), DomainError);
    EXPECT_THROW(bound_lemma33_second(1.0, 0.0, h, -0.1), DomainError);
    EXPECT_THROW(bound_lemma33_second(1.0, 2.0, 1e-3, tf), DomainError);
}

TEST(Lemma33Second, VanishesSlowerThanAnyPower) {
    // At t = 100, x = -10 the exponent is -0.72 (L^{2/3} + 100); against h^{1/2}
    // the ratio turns upward after the first few halvings.
    const double tf = tail_factor_full_line();
    double prev_bound = INFINITY, prev_ratio = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double h = std::ldexp(1.0, -k);
        const double b = bound_lemma33_second(100.0, -10.0, h, tf);
        EXPECT_GT(b, 0.0);
        EXPECT_LT(b, prev_bound);
        const double ratio = b / std::sqrt(h);
        if (k > 2) {
            EXPECT_GT(ratio, prev_ratio) << k;
        }
        prev_bound = b;
        prev_ratio = ratio;
    }
}

// Reference value computed with 30-digit arithmetic.
TEST(Order0Reference, PinnedValueAndCodomain) {
    EXPECT_NEAR(order0_reference(2.0, 2.0), 0.064389109440368172, 1e-15);
    for (double t : {1.0, 2.0, 5.0})
        for (int k = 1; k <= 30; ++k) {
            const double v = order0_reference(std::ldexp(1.0, k), t);
            EXPECT_GT(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    EXPECT_THROW(order0_reference(1.0, 2.0), DomainError);
    EXPECT_THROW(order0_reference(2.0, 0.0), DomainError);
}

// The ratio to N^{-0.05} keeps falling up to N = 2^75 at T = 2 and rises after.
TEST(Order0Reference, RatioToSmallPowerEventuallyIncreases) {
    auto ratio = [](int k) {
        const double n = std::ldexp(1.0, k);
        return order0_reference(n, 2.0) * std::pow(n, 0.05);
    };
    for (int k = 2; k <= 30; ++k) EXPECT_LT(ratio(k), ratio(k - 1)) << k;
    for (int k = 77; k <= 1000; ++k) EXPECT_GT(ratio(k), ratio(k - 1)) << k;
    EXPECT_GT(ratio(1000), ratio(1));
}

TEST(GuideLines, Values) {
    EXPECT_DOUBLE_EQ(order_half_line(4.0), 1.0 / 30.0);
    EXPECT_DOUBLE_EQ(order_one_line(4.0), 1.0 / 60.0);
}
