#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fd/green.hpp"
#include "fd/parametrix.hpp"

using namespace fd;

namespace {
constexpr double kPi = std::numbers::pi;

GreenQuery query(double h, double t, double y, int m = 0) {
    GreenQuery q;
    q.m = m;
    q.h = h;
    q.a = q.gamma = 0.25;
    q.t = t;
    q.x = 0.25;
    q.y = y;
    return q;
}

double on_front(double t) { return -t * std::sqrt(1.25); }

// A critical point built backwards: pick (Upsilon, S, A, eta, N) and solve the
// four stationarity equations for X, a/gamma, T and Y.
PhasePoint constructed(int N, double U, double S, double A, double eta, const PsiContext& c, double lam) {
    PhasePoint p;
    p.N = N;
    p.Upsilon = U;
    p.S = S;
    p.A = A;
    p.eta = eta;
    p.lambda_gamma = lam;
    p.X = A - U * U;
    const double mh = c.m * c.m * c.h * c.h / (eta * eta);
    const double r = std::sqrt(1 + c.gamma * A + mh);
    const auto b = b_remainder(eta * lam * A * std::sqrt(A));
    p.T = 2 * r * (U + S + 2 * N * std::sqrt(A) * (1 - 0.75 * b.bp));
    // The eta-derivative is linear in Y with unit slope.
    p.Y = 0;
    p.Y = -phase_psi(p, c).grad[3];
    return p;
}
}  // namespace

TEST(NWindow, CentredOnTheReflectionLattice) {
    const auto w0 = n_window(0, 0.25);
    EXPECT_EQ(w0.lo, -w0.hi);
    EXPECT_LE(w0.lo, -1);
    const auto w = n_window(20, 0.25);
    const double period = 4 * 0.5 * std::sqrt(1.25);
    EXPECT_LE(w.lo, 20 / period);
    EXPECT_GE(w.hi, 20 / period);
    EXPECT_GE(n_window(20, 0.25, 1.5).size(), w.size());
    EXPECT_THROW(n_window(1, 0), ArgumentError);
    EXPECT_THROW(n_window(1, 1, 0), ArgumentError);
}

TEST(ReflectedSum, MatchesTheSpectralSum) {
    for (double t : {1.0, 3.0}) {
        const auto q = query(1.0 / 64, t, on_front(t));
        const auto g = green_high_freq(q).value;
        const auto s = sum_reflected(q).value;
        EXPECT_LT(std::abs(g - s), 1e-3 * std::abs(g)) << t;
    }
    const auto q = query(1.0 / 128, 0.75, 0.9 * on_front(0.75));
    EXPECT_LT(std::abs(green_high_freq(q).value - sum_reflected(q).value), 1e-3 * std::abs(green_high_freq(q).value));
}

TEST(ReflectedSum, WiderWindowChangesNothing) {
    const auto q = query(1.0 / 64, 3.0, on_front(3.0));
    const auto a = sum_reflected(q);
    const auto b = sum_reflected(q, n_window(q.t, q.gamma, 1.5));
    EXPECT_GT(b.window.size(), a.window.size());
    EXPECT_LT(std::abs(a.value - b.value), 1e-3 * a.scale);
}

TEST(ReflectedSum, SingleWaveBeforeTheFirstReflection) {
    // T = 0 < sqrt(gamma), at the peak: the direct wave alone, once h is small enough.
    const auto q = query(1.0 / 512, 0.0, 0.0);
    const auto full = sum_reflected(q);
    const auto direct = sum_reflected(q, NWindow{0, 0}, 1.0);
    EXPECT_LT(std::abs(full.value - direct.value), 1e-6 * std::abs(full.value));
}

TEST(ReflectedSum, TooNarrowWindowIsRejected) {
    const auto q = query(1.0 / 64, 3.0, on_front(3.0));
    EXPECT_THROW(sum_reflected(q, NWindow{0, 0}), WindowError);
    EXPECT_THROW(sum_reflected(q, NWindow{1, 0}), ArgumentError);
}

TEST(ReflectedSum, NeedsALargeParameter) {
    // gamma^{3/2} / h = 2 < 5.
    EXPECT_THROW(sum_reflected(query(1.0 / 16, 1.0, 0)), RegimeError);
    EXPECT_THROW(wave_packet(0, query(1.0 / 16, 1.0, 0)), RegimeError);
}

TEST(WavePacket, TimeReversalConjugates) {
    for (int N : {0, 1, -2}) {
        const auto q = query(1.0 / 64, 1.7, -1.3);
        auto r = q;
        r.t = -q.t;
        const auto v = wave_packet(N, q);
        const auto w = wave_packet(-N, r);
        EXPECT_LT(std::abs(std::conj(v) - w), 1e-10 * std::max(1.0, std::abs(v))) << N;
    }
}

// sup over y of |V_N| at x = a, N = 1..3 < lambda^{1/3} (h = 2^-8, lambda = 32).
double packet_sup(int N, double dT) {
    const double g = 0.25, h = 1.0 / 256;
    auto q = query(h, (4 * N + dT) * std::sqrt(g) * std::sqrt(1 + g), 0);
    const double y_max = q.t * std::sqrt(1 + g) + 2;
    const ReflectedWaves w(q, {N, N}, y_max);
    double sup = 0;
    for (double y = -y_max; y <= 0; y += h / 4) sup = std::max(sup, std::abs(w.packet(N, y).value));
    return sup;
}

TEST(WavePacket, BoundShapesNearTheCaustic) {
    const double h = 1.0 / 256, lam = lambda_gamma(0.25, h), base = std::pow(h, 1.0 / 3 - 2);
    double lo = 1e300, hi = 0;
    for (int N = 1; N <= 3; ++N) {
        // At T = 4N: h^{1/3-2} / (N / lambda^{1/3})^{1/4}.
        const double r = packet_sup(N, 0) * std::pow(N / std::cbrt(lam), 0.25) / base;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        // One unit away: h^{1/3-2} / |N (T - 4N)|^{1/2}.
        EXPECT_LT(packet_sup(N, 1) * std::sqrt(N) / base, 1.0) << N;
    }
    EXPECT_LT(hi / lo, 2.0);
}

TEST(WavePacket, EvenInY) {
    const auto q = query(1.0 / 64, 1.2, -0.9);
    auto r = q;
    r.y = -q.y;
    EXPECT_LT(std::abs(wave_packet(1, q) - wave_packet(1, r)), 1e-12 * std::abs(wave_packet(1, q)));
}

TEST(PhasePsi, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(-2.5, 2.5), as(1.0, 7.0), es(0.6, 1.4), ts(0, 20), xs(0, 3);
    std::uniform_int_distribution<int> ns(-3, 3), ms(0, 1);
    for (int i = 0; i < 100; ++i) {
        PhasePoint p;
        p.N = ns(rng);
        p.T = ts(rng);
        p.X = xs(rng);
        p.Y = us(rng);
        p.Upsilon = us(rng);
        p.S = us(rng);
        p.A = as(rng);
        p.eta = es(rng);
        p.lambda_gamma = 16;
        const PsiContext c{ms(rng), 1.0, 0.25, 1.0 / 128};
        const auto v = phase_psi(p, c);
        double* coord[4] = {&p.Upsilon, &p.S, &p.A, &p.eta};
        for (int j = 0; j < 4; ++j) {
            const double h = 1e-5, x0 = *coord[j];
            *coord[j] = x0 + h;
            const double up = phase_psi(p, c).value;
            *coord[j] = x0 - h;
            const double dn = phase_psi(p, c).value;
            *coord[j] = x0;
            const double fd = (up - dn) / (2 * h);
            EXPECT_LT(std::abs(fd - v.grad[j]), 1e-6 * std::max(1.0, std::abs(v.grad[j]))) << i << " " << j;
        }
    }
}

TEST(PhasePsi, RescalesToTheOriginalPhase) {
    const double g = 0.25, h = 1.0 / 128, a = 0.25;
    const double lam = lambda_gamma(g, h);
    for (int N : {-2, 0, 1, 3})
        for (int m : {0, 1}) {
            PhasePoint p{N, 2.5, 1.3, -0.4, 0.7, -1.1, 2.2, 1.1, lam};
            const PsiContext c{m, a / g, g, h};
            const double sg = std::sqrt(g);
            const double t = sg * p.T, x = g * p.X, y = std::pow(g, 1.5) * p.Y - t * std::sqrt(1 + g);
            const double phi = phi_n(N, m, h, a, t, x, y, sg * p.Upsilon, sg * p.S, g * p.A, p.eta);
            EXPECT_NEAR(std::pow(g, 1.5) * phase_psi(p, c).value, phi + h * N * kPi / 2, 1e-10) << N << " " << m;
        }
}

TEST(PhasePsi, DirectWaveTimeCondition) {
    // N = 0, m = 0: the A-derivative vanishes iff T = 2 sqrt(1 + gamma A) (Upsilon + S).
    PhasePoint p;
    p.A = 2.0;
    p.Upsilon = 0.4;
    p.S = 0.9;
    p.T = 2 * std::sqrt(1 + 0.25 * 2.0) * 1.3;
    EXPECT_NEAR(phase_psi(p, {}).grad[2], 0, 1e-14);
    EXPECT_THROW(phase_psi(PhasePoint{0, 0, 0, 0, 0, 0, 0.0, 1, 10}, {}), DomainError);
}

TEST(CriticalSolve, RecoversAConstructedPoint) {
    const double g = 0.25, h = 1.0 / 128, lam = lambda_gamma(g, h);
    for (int m : {0, 1})
        for (int N : {0, 1, 2}) {
            const PsiContext c{m, 1.0, g, h};
            const auto p = constructed(N, 0.8, 1.0, 2.0, 1.05, c, lam);
            for (double r : detail::critical_residual(p, c)) ASSERT_NEAR(r, 0, 1e-12);
            const auto sol = critical_solve(N, p.T, p.X, p.Y, g, h, g, m);
            bool found = false;
            for (const auto& s : sol.solutions) {
                PhasePoint q = p;
                q.Upsilon = s.Upsilon;
                q.S = s.S;
                q.A = s.A;
                q.eta = s.eta;
                EXPECT_LT(std::abs(crit_yt_residual(q, c)), 1e-8);
                // With N = m = 0 the phase is linear in eta: a whole line of critical points.
                const double de = (N == 0 && m == 0) ? 0.0 : s.eta - 1.05;
                found = found || std::hypot(std::hypot(s.Upsilon - 0.8, s.S - 1.0), std::hypot(s.A - 2.0, de)) < 1e-8;
            }
            EXPECT_TRUE(found) << m << " " << N;
        }
}

TEST(CriticalSolve, DirectWaveFamily) {
    // N = 0, m = 0, X = 0, a/gamma = 1: S^2 + 1 = A, Upsilon^2 = A, S + Upsilon = T / (2 sqrt(1 + gamma A)).
    const double g = 0.25, h = 1.0 / 128;
    const PsiContext c{0, 1.0, g, h};
    const auto p = constructed(0, std::sqrt(3.0), std::sqrt(2.0), 3.0, 1.0, c, lambda_gamma(g, h));
    ASSERT_NEAR(p.X, 0, 1e-15);
    const auto sol = critical_solve(0, p.T, 0, p.Y, g, h, g, 0);
    ASSERT_FALSE(sol.solutions.empty());
    for (const auto& s : sol.solutions) {
        EXPECT_NEAR(s.S * s.S + 1, s.A, 1e-8);
        EXPECT_NEAR(s.Upsilon * s.Upsilon, s.A, 1e-8);
        EXPECT_NEAR(s.S + s.Upsilon, p.T / (2 * std::sqrt(1 + g * s.A)), 1e-8);
    }
}

TEST(CriticalSolve, NoCriticalPointFarFromTheLattice) {
    const double g = 0.25, h = 1.0 / 128;
    const PsiContext c{0, 1.0, g, h};
    const auto p = constructed(1, 0.8, 1.0, 2.0, 1.05, c, lambda_gamma(g, h));
    EXPECT_TRUE(critical_solve(12, p.T, p.X, p.Y, g, h, g, 0).solutions.empty());
    EXPECT_THROW(critical_solve(0, 1, 0, 0, 0, h, g, 0), ArgumentError);
}

TEST(Overlap, EarlyTimesSeeAtMostThreeWaves) {
    const double g = 0.25, h = 1.0 / 128;
    for (double T : {0.5, 1.5, 2.5})
        for (double X : {0.5, 1.0, 2.0})
            for (int m : {0, 1}) {
                const double t = T * std::sqrt(g);
                const auto r = overlap_count(t, X * g, on_front(t), g, h, m);
                for (int N : r.members) EXPECT_LE(std::abs(N), 1) << T << " " << X << " " << m;
                // The direct wave passes through the source height on the front.
                if (X == 1.0) {
                    EXPECT_NE(std::find(r.members.begin(), r.members.end(), 0), r.members.end()) << T << " " << m;
                }
                EXPECT_GE(r.bound_rhs, 1);
            }
}

TEST(Overlap, MassMakesNoDifferenceAtModerateTimes) {
    for (double T : {1.0, 10.0, 40.0}) {
        const double g = 0.25, h = 1.0 / 128, t = T * std::sqrt(g);
        const auto r0 = overlap_count(t, g, on_front(t), g, h, 0);
        const auto r1 = overlap_count(t, g, on_front(t), g, h, 1);
        EXPECT_LE(std::abs(static_cast<int>(r0.members.size()) - static_cast<int>(r1.members.size())), 1) << T;
    }
}

TEST(Overlap, BoundFormula) {
    const double g = 0.5, h = 1.0 / 64;
    EXPECT_NEAR(overlap_bound(10, g, h, 0), 1 + 10 / (std::sqrt(g) * g * g * g / (h * h)), 1e-14);
    EXPECT_NEAR(overlap_bound(10, g, h, 1) - overlap_bound(10, g, h, 0), 10 * h * h / std::pow(g, 1.5), 1e-14);
    EXPECT_THROW(overlap_count(1, -0.1, 0, g, h, 0), DomainError);
}

TEST(AiryPoisson, BumpAtTheFirstZero) {
    const double w1 = airy_zero(1);
    const auto f = bump(w1, 0.3);
    const auto r = airy_poisson_check(f, w1 - 0.15, w1 + 0.15, 100);
    EXPECT_EQ(r.zeros_in_support, 1);
    EXPECT_NEAR(r.rhs, 2 * kPi / lprime_at_zero(1), 1e-12);
    EXPECT_LT(std::abs(r.lhs - r.rhs), 1e-3 * r.rhs);
    EXPECT_LT(std::abs(r.lhs_imag), 1e-10);
}

TEST(AiryPoisson, NoZeroInTheSupport) {
    const double lo = airy_zero(1) + 0.2, hi = airy_zero(2) - 0.2;
    const auto f = bump(0.5 * (lo + hi), hi - lo);
    const auto r = airy_poisson_check(f, lo, hi, 100);
    EXPECT_EQ(r.zeros_in_support, 0);
    EXPECT_EQ(r.rhs, 0);
    EXPECT_LT(std::abs(r.lhs), 1e-4);
    EXPECT_LT(std::abs(r.lhs_imag), 1e-10);
}

TEST(AiryPoisson, BadArguments) {
    const auto f = bump(1, 1);
    EXPECT_THROW(airy_poisson_check(f, 0, 1, -1), ArgumentError);
    EXPECT_THROW(airy_poisson_check(f, 1, 1, 3), ArgumentError);
    EXPECT_THROW(airy_poisson_check(f, 0, 1e6, 3), RangeError);
    EXPECT_THROW(bump(1, 0), ArgumentError);
}

TEST(TransverseRescale, IdentityAndArithmetic) {
    const auto id = transverse_rescale(0.01, 0.01, 3, 0.2, 0.5, -1);
    EXPECT_FALSE(id.negligible);
    EXPECT_DOUBLE_EQ(id.T, 3);
    EXPECT_DOUBLE_EQ(id.X, 0.2);
    EXPECT_DOUBLE_EQ(id.a_tilde, 0.5);
    EXPECT_DOUBLE_EQ(id.Y, 2);
    EXPECT_NEAR(id.lambda_tilde, 100, 1e-12);
    const auto s = transverse_rescale(0.01, 0.02, 100, 0.4, 1, 2);
    EXPECT_DOUBLE_EQ(s.T, 25);
    EXPECT_DOUBLE_EQ(s.X, 0.1);
    EXPECT_DOUBLE_EQ(s.Y, 102.0 / 8);
    EXPECT_DOUBLE_EQ(s.a_tilde, 0.25);
    EXPECT_NEAR(s.lambda_tilde, 400, 1e-9);
    EXPECT_TRUE(transverse_rescale(0.01, 0.02, 1, 0, 17, 0).negligible);
    EXPECT_THROW(transverse_rescale(0.02, 0.01, 1, 0, 1, 0), ArgumentError);
}
