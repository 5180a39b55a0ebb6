#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fd/decay.hpp"

using namespace fd;

TEST(FitExponent, SyntheticPowerLaw) {
    std::vector<double> t, v;
    for (int i = 0; i < 8; ++i) {
        t.push_back(8 * std::pow(2.0, i));
        v.push_back(1 / std::sqrt(t.back()));
    }
    const auto f = fit_exponent(t, v);
    EXPECT_NEAR(f.exponent, 0.5, 1e-14);
    EXPECT_FALSE(f.degenerate);
    EXPECT_TRUE(fit_exponent(t, std::vector<double>(t.size(), 2.0)).degenerate);
}

TEST(FitExponent, CurveNeedsEnoughData) {
    DecayCurve c;
    c.t_values = {1, 2, 3};
    c.sup_values = {3, 2, 1};
    EXPECT_THROW(fit_exponent(c, false), ArgumentError);
    EXPECT_THROW(fit_exponent(c, true), ArgumentError);
}

TEST(Peaks, QuadraticVertex) {
    // Samples of 5 - (t - 2.3)^2 on a 0.5 grid: refinement recovers the vertex exactly.
    std::vector<double> t, v;
    for (double s = 0; s <= 5; s += 0.5) {
        t.push_back(s);
        v.push_back(5 - (s - 2.3) * (s - 2.3));
    }
    const auto p = detect_peaks(t, v);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0].t, 2.3, 1e-12);
    EXPECT_NEAR(p[0].height, 5, 1e-12);
}

TEST(Peaks, EnvelopeIsNonIncreasing) {
    // Decaying oscillation with small shoulder ripples.
    std::vector<double> t, v;
    for (double s = 1; s <= 40; s += 0.05) {
        t.push_back(s);
        v.push_back(std::pow(s, -0.25) * (1.5 + std::cos(2 * s) + 0.05 * std::cos(13 * s)));
    }
    const auto all = detect_peaks(t, v);
    const auto env = envelope_peaks(all, t, v);
    ASSERT_GE(env.size(), 4u);
    EXPECT_LT(env.size(), all.size());
    for (std::size_t i = 1; i < env.size(); ++i) EXPECT_LE(env[i].height, env[i - 1].height);
    DecayCurve c;
    c.t_values = t;
    c.sup_values = v;
    EXPECT_NEAR(fit_exponent(c, true).exponent, 0.25, 0.02);
}

TEST(PeakTimes, FormulaAndCap) {
    const auto p = peak_times(1.0, 3);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p[0], 4 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(p[2], 12 * std::sqrt(2.0), 1e-13);
    std::vector<std::string> w;
    peak_times(0.25, 3, 1.0 / 256, &w);
    EXPECT_TRUE(w.empty());
    peak_times(0.25, 8, 1.0 / 256, &w);
    EXPECT_EQ(w.size(), 1u);
    EXPECT_THROW(peak_times(0, 1), ArgumentError);
}

TEST(Regime, ClassifierExamples) {
    const double h = std::pow(2.0, -12);
    auto r = regime_classifier(0.25, 0.25, 0.25, h);
    EXPECT_EQ(r.regime, DecayRegime::free);
    EXPECT_EQ(r.exponent, 0.5);

    const double a = std::sqrt(h), t = a * a / (2 * h);
    r = regime_classifier(t, a, a, h);
    EXPECT_EQ(r.regime, DecayRegime::n_below_lambda);
    EXPECT_NEAR(r.envelope, std::pow(h, -2) * std::pow(h / t, 0.25) * std::pow(a, 0.25), 1e-9 * r.envelope);

    const double b = 0.25, ts = 2 * std::pow(b, 3.5) / (h * h), lam = std::pow(b, 1.5) / h;
    r = regime_classifier(ts, b, b, h);
    EXPECT_EQ(r.regime, DecayRegime::spectral_overlap);
    EXPECT_NEAR(r.envelope, std::pow(h, -2) * std::sqrt(h / ts) * std::cbrt(lam), 1e-9 * r.envelope);
    EXPECT_THROW(regime_classifier(0, 1, 1, h), ArgumentError);
}

TEST(Grid, HighFrequencyResolution) {
    const double a = 0.25, g = 0.25, h = 1.0 / 256;
    const auto s = high_freq_grid(a, g, h, 10);
    EXPECT_DOUBLE_EQ(s.x_fine, a / 64);
    EXPECT_NEAR(s.y_fine, std::min(std::pow(g, 1.5), 10 * h) / 8, 1e-15);
    EXPECT_LE(s.y_lo, -(1 + g) * 10);
    EXPECT_EQ(s.y_hi, 0);
}

TEST(SupScan, ConcentratedAtTheSourceAtTimeZero) {
    const auto r = sup_scan(0, 1.0 / 64, 0.25, 0.25, 0.0);
    EXPECT_NEAR(r.x, 0.25, 0.25 / 32);
    EXPECT_NEAR(r.y, 0, 1e-12);
    EXPECT_GT(r.points, 0);
}

TEST(SupScan, MassIsInvisibleAtHighFrequency) {
    for (double t : {2.0, 8.0, 32.0, 64.0}) {
        const double s0 = sup_scan(0, 1.0 / 64, 0.25, 0.25, t).sup;
        const double s1 = sup_scan(1, 1.0 / 64, 0.25, 0.25, t).sup;
        EXPECT_LT(std::abs(s0 - s1), 0.1 * s0) << t;
    }
}

TEST(DecayScan, RerunsAreIdentical) {
    std::vector<double> ts;
    for (double t = 0.5; t <= 6; t += 0.25) ts.push_back(t);
    const auto a = decay_scan_high(0, 1.0 / 64, 0.25, 0.25, ts);
    const auto b = decay_scan_high(0, 1.0 / 64, 0.25, 0.25, ts);
    EXPECT_EQ(a.sup_values, b.sup_values);
    EXPECT_EQ(a.argmax_points, b.argmax_points);
    EXPECT_FALSE(a.peaks.empty());
    EXPECT_GT(envelope_constant(a, 0.25, 0.25, 1.0 / 64), 0);
    EXPECT_THROW(decay_scan_high(0, 1.0 / 64, 0.25, 0.25, {}), ArgumentError);
}
