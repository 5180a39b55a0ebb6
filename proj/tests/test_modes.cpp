#include <gtest/gtest.h>

#include <cmath>

#include "fd/cutoff.hpp"
#include "fd/modes.hpp"

using namespace fd;

TEST(Eigenvalue, ClosedForm) {
    EXPECT_NEAR(eigenvalue(1, 1.0), 1 + airy_zero(1), 1e-14);
    EXPECT_NEAR(eigenvalue(3, 8.0), 64 + airy_zero(3) * 16, 1e-12);
    EXPECT_DOUBLE_EQ(eigenvalue(2, -2.0), eigenvalue(2, 2.0));
}

TEST(Eigenvalue, BadArguments) {
    EXPECT_THROW(eigenvalue(0, 1.0), ArgumentError);
    EXPECT_THROW(eigenmode(1, 0.0), DomainError);
    EXPECT_THROW(eigenfunction(1, 1.0, -0.1), DomainError);
}

TEST(Eigenmode, DirichletAtTheBoundary) {
    for (int k : {1, 4, 10})
        for (double th : {0.5, 1.0, 2.0}) EXPECT_NEAR(eigenfunction(k, th, 0.0), 0.0, 1e-12);
}

TEST(Eigenmode, UnitNorm) {
    for (int k = 1; k <= 10; ++k)
        for (double th : {0.5, 1.0, 2.0}) {
            const auto r = mode_norm_squared(k, th);
            EXPECT_NEAR(std::sqrt(r.value), 1.0, 1e-8) << k << " " << th;
            EXPECT_LT(r.tail_bound, 1e-12);
        }
}

TEST(Eigenmode, PairwiseOrthogonal) {
    for (double th : {0.5, 1.0, 2.0})
        for (int j = 1; j <= 10; ++j)
            for (int k = j + 1; k <= 10; ++k) EXPECT_NEAR(mode_overlap(j, k, th).value, 0.0, 1e-7) << j << k << th;
}

TEST(Eigenmode, SturmZeroCount) {
    for (int k = 1; k <= 10; ++k)
        for (double th : {0.5, 1.0, 2.0}) EXPECT_EQ(interior_zero_count(k, th), k - 1) << k << " " << th;
}

TEST(Eigenmode, SolvesTheOperatorEquation) {
    for (int k : {1, 3, 7})
        for (double th : {0.5, 2.0}) {
            const auto e = eigenmode(k, th);
            for (double x : {0.2, 0.5 * e.turning_point(), e.turning_point()}) {
                const double lhs = apply_operator_fd(k, th, x, 1e-4);
                const double scale = e.lambda * std::max(std::abs(e(x)), 1e-3 * e.normalizer);
                EXPECT_NEAR(lhs, e.lambda * e(x), 1e-5 * scale) << k << " " << th << " " << x;
            }
        }
}

TEST(Eigenmode, NormalizerUsesLPrime) {
    // int Ai(s - w_k)^2 ds over s > 0 is Ai'(-w_k)^2 = L'(w_k)/(2 pi) in Wronskian form.
    for (int k : {1, 2, 5}) {
        const double w = airy_zero(k);
        const double d = ai_deriv(-w);
        EXPECT_NEAR(lprime_at_zero(k), 2 * std::numbers::pi * d * d, 1e-10 * lprime_at_zero(k));
    }
}

TEST(DiracSum, ConvergesToTheTestFunction) {
    // Gaussian at x0 = 1 mollified to vanish near 0 and 2.
    auto f = [](double x) {
        const double g = std::exp(-(x - 1) * (x - 1) / (2 * 0.25 * 0.25));
        return g * smooth_step((x - 0.05) / 0.2) * smooth_step((1.95 - x) / 0.2);
    };
    double prev_err = 1;
    for (int K : {100, 200, 400}) {
        const auto r = dirac_partial_sum(1.0, 1.0, K, f, 0.05, 1.95);
        const double err = std::abs(r.value - f(1.0));
        EXPECT_LT(err, prev_err) << K;
        prev_err = err;
    }
    EXPECT_LT(prev_err, 2e-3);
}

TEST(DiracSum, VanishesAwayFromTheSupport) {
    // Same shape moved to x = 3; the partial sum at x0 = 1 tends to 0.
    auto f = [](double x) {
        const double g = std::exp(-(x - 3) * (x - 3) / (2 * 0.25 * 0.25));
        return g * smooth_step((x - 2.05) / 0.2) * smooth_step((3.95 - x) / 0.2);
    };
    const auto r = dirac_partial_sum(1.0, 1.0, 400, f, 2.05, 3.95);
    EXPECT_LT(std::abs(r.value), 1e-3);
}

TEST(DiracSum, BadArguments) {
    auto f = [](double) { return 1.0; };
    EXPECT_THROW(dirac_partial_sum(0.0, 1.0, 10, f, 0, 1), DomainError);
    EXPECT_THROW(dirac_partial_sum(1.0, 1.0, 0, f, 0, 1), ArgumentError);
    EXPECT_THROW(dirac_partial_sum(1.0, 1.0, 10, f, 1, 1), ArgumentError);
}
