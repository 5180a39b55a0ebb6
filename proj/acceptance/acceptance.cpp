// Acceptance harness: one PASS/FAIL line per criterion, INFO lines for the
// numbers behind it. Exit status 1 if any criterion fails.
//
//   acceptance [name...]     run only the named criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fd/fd.hpp"

using namespace fd;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void info(const char* fmt, auto... args) {
    std::printf("  INFO ");
    std::printf(fmt, args...);
    std::printf("\n");
}

void verdict(const std::string& name, bool ok, const std::string& what) {
    std::printf("%s %-22s %s\n", ok ? "PASS" : "FAIL", name.c_str(), what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of v against t.
double linear_slope(const std::vector<double>& t, const std::vector<double>& v) {
    double mt = 0, mv = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        mv += v[i];
    }
    mt /= static_cast<double>(t.size());
    mv /= static_cast<double>(t.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - mt) * (v[i] - mv);
        den += (t[i] - mt) * (t[i] - mt);
    }
    return num / den;
}

// ---------------------------------------------------------------------------

void airy_zeros_check() {
    const auto t0 = std::chrono::steady_clock::now();
    const double ref[3][2] = {{1, 2.3381074105}, {4, 6.7867080901}, {8, 11.0085243037}};
    double worst = 0;
    for (const auto& r : ref) {
        const double w = airy_zero(static_cast<int>(r[0]));
        info("omega_%d = %.12f", static_cast<int>(r[0]), w);
        worst = std::max(worst, std::abs(w - r[1]));
    }
    const double dt = seconds_since(t0);
    verdict("airy-zeros", worst <= 1e-8 && dt < 1, fmt("max error %.2e (<= 1e-8), %.3f s (< 1 s)", worst, dt));
}

double remainder_slope(double b1) {
    std::vector<double> w, r;
    for (int i = 0; i <= 40; ++i) {
        const double x = 5 * std::pow(6.0, i / 40.0);
        w.push_back(x);
        r.push_back(std::abs(big_l(x) - 4.0 / 3.0 * x * std::sqrt(x) - kPi / 2 + b1 / (x * std::sqrt(x))));
    }
    return -fit_power_law(w, r).exponent;
}

void l_function_check() {
    const double l0 = std::abs(big_l(0) - kPi / 3);
    double lattice = 0;
    for (int k = 1; k <= 20; ++k) {
        const double l = big_l(airy_zero(k));
        lattice = std::max(lattice, std::abs(l - 2 * kPi * std::round(l / (2 * kPi))));
    }
    const double s16 = remainder_slope(5.0 / 16.0), s24 = remainder_slope(5.0 / 24.0);
    info("|L(0) - pi/3| = %.2e, max dist of L(omega_k) to 2 pi Z (k <= 20) = %.2e", l0, lattice);
    info("remainder log-log slope on [5, 30]: %.3f with 5/16, %.3f with 5/24", s16, s24);
    verdict("l-function", l0 <= 1e-10 && lattice <= 1e-8 && s16 <= -3,
            fmt("L(0) %.1e, lattice %.1e, slope(5/16) %.2f (<= -3)", l0, lattice, s16));
}

void eigenmode_check() {
    const auto t0 = std::chrono::steady_clock::now();
    double norm_err = 0, orth = 0;
    bool sturm = true;
    for (double th : {0.5, 1.0, 2.0})
        for (int k = 1; k <= 10; ++k) {
            norm_err = std::max(norm_err, std::abs(std::sqrt(mode_norm_squared(k, th).value) - 1));
            sturm = sturm && interior_zero_count(k, th) == k - 1;
            for (int j = k + 1; j <= 10; ++j) orth = std::max(orth, std::abs(mode_overlap(j, k, th).value));
        }
    const double dt = seconds_since(t0);
    verdict("eigenmodes", norm_err <= 1e-8 && orth <= 1e-7 && sturm && dt < 30,
            fmt("norm %.1e (<= 1e-8), orthogonality %.1e (<= 1e-7), zero counts %s, %.1f s (< 30 s)", norm_err, orth,
                sturm ? "exact" : "WRONG", dt));
}

void airy_poisson_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    const double w1 = airy_zero(1), w2 = airy_zero(2);
    const auto r = airy_poisson_check(bump(w1, 0.3), w1 - 0.15, w1 + 0.15, 400);
    const double rel = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
    // No zero in the support: a bump of the same width midway between omega_1 and omega_2.
    const double c = 0.5 * (w1 + w2);
    const auto f0 = bump(c, 0.3);
    const auto z = airy_poisson_check(f0, c - 0.15, c + 0.15, 400);
    const double norm = integrate_adaptive([&](double w) { return std::abs(f0(w)); }, c - 0.15, c + 0.15, 1e-14).value;
    const double dt = seconds_since(t0);
    info("bump at omega_1: lhs %.12f rhs %.12f imag %.1e", r.lhs, r.rhs, r.lhs_imag);
    info("zero-free bump: |lhs| %.2e, ||f||_1 %.4f, zeros in support %d", std::abs(z.lhs), norm, z.zeros_in_support);
    verdict("airy-poisson", rel <= 1e-3 && std::abs(z.lhs) <= 1e-4 * norm && dt < 120,
            fmt("rel %.2e (<= 1e-3), zero case %.1e (<= %.1e), %.1f s (< 120 s)", rel, std::abs(z.lhs), 1e-4 * norm, dt));
}

void representation_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    int n = 0;
    for (double t : {0.75, 2.25, 4.5})
        for (double f : {0.95, 1.0, 1.05}) {
            GreenQuery q;
            q.h = 1.0 / 128;
            q.a = q.gamma = 0.25;
            q.x = 0.25;
            q.t = t;
            q.y = -f * t * std::sqrt(1.25);
            const auto g = green_high_freq(q).value;
            const auto s = sum_reflected(q);
            const double rel = std::abs(g - s.value) / std::abs(g);
            info("t %.2f y %+.4f |G| %.6e rel %.2e window [%d, %d]", t, q.y, std::abs(g), rel, s.window.lo, s.window.hi);
            worst = std::max(worst, rel);
            ++n;
        }
    const double dt = seconds_since(t0);
    verdict("equivalence", worst <= 1e-3 && dt < 600,
            fmt("%d points, worst rel %.2e (<= 1e-3), %.1f s (< 600 s)", n, worst, dt));
}

void reflection_peaks() {
    const auto t0 = std::chrono::steady_clock::now();
    const double h = 1.0 / 256, a = 0.25;
    std::vector<double> ts;
    for (int i = 1; i <= 560; ++i) ts.push_back(0.05 * i);
    auto c = decay_scan_high(0, h, a, a, ts);
    const auto env = envelope_peaks(c.peaks, c.t_values, c.sup_values);
    std::vector<std::string> warn;
    const auto tn = peak_times(a, 8, h, &warn);
    for (const auto& w : warn) info("%s", w.c_str());
    double worst = 0;
    for (std::size_t n = 0; n < tn.size(); ++n) {
        double best = 1e300, at = 0;
        for (const auto& p : env)
            if (std::abs(p.t - tn[n]) < best) {
                best = std::abs(p.t - tn[n]);
                at = p.t;
            }
        info("n %zu: t_n %.4f nearest envelope peak %.4f (off %.3f)", n + 1, tn[n], at, best);
        worst = std::max(worst, best);
    }
    const auto fit = fit_exponent(c, true);
    info("%zu local maxima, %zu envelope peaks, fit residual %.3f", c.peaks.size(), env.size(), fit.residual);
    const double tol = std::sqrt(a) / 4;
    verdict("reflection-peaks", worst <= tol && std::abs(fit.exponent - 0.25) <= 0.08,
            fmt("worst offset %.3f (<= %.3f), envelope exponent %.4f (0.25 +- 0.08), %.0f s", worst, tol, fit.exponent,
                seconds_since(t0)));
}

void overlap_counting() {
    const auto t0 = std::chrono::steady_clock::now();
    bool small_ok = true, slope_ok = true, mass_ok = true, mass_late_ok = true;
    for (double g : {0.25, 0.5})
        for (double h : {1.0 / 64, 1.0 / 128}) {
            const double sg = std::sqrt(g);
            auto count = [&](double T, double X, double dY, int m) {
                const double t = T * sg;
                return overlap_count(t, X * g, dY * std::pow(g, 1.5) - t * std::sqrt(1 + g), g, h, m);
            };
            for (double T : {0.5, 1.5, 2.5})
                for (double X : {0.5, 1.0, 2.0})
                    for (double dY : {-0.5, 0.0, 0.5})
                        for (int m : {0, 1})
                            for (int N : count(T, X, dY, m).members) small_ok = small_ok && std::abs(N) <= 1;

            const auto Ts = geometric_grid(1e3, 1e6, 7);
            std::vector<double> t, v;
            std::string row;
            int late = 0;
            for (double T : Ts) {
                const auto n0 = count(T, 1, 0, 0).members.size(), n1 = count(T, 1, 0, 1).members.size();
                t.push_back(T * sg);
                v.push_back(static_cast<double>(n0));
                row += fmt(" %zu/%zu", n0, n1);
                late = std::max(late, std::abs(static_cast<int>(n0) - static_cast<int>(n1)));
            }
            const double rate = 1 / (sg * g * g * g / (h * h));
            const double slope = linear_slope(t, v);
            slope_ok = slope_ok && slope >= rate / 4 && slope <= 4 * rate;
            mass_late_ok = mass_late_ok && late <= 1;

            int diff = 0;
            std::string early;
            for (double T : {1.0, 2.5, 10.0, 40.0, 200.0}) {
                const auto n0 = count(T, 1, 0, 0).members.size(), n1 = count(T, 1, 0, 1).members.size();
                early += fmt(" %zu/%zu", n0, n1);
                diff = std::max(diff, std::abs(static_cast<int>(n0) - static_cast<int>(n1)));
            }
            mass_ok = mass_ok && diff <= 1;
            info("g %.2f h 2^-%.0f: counts m0/m1 at T = 1, 2.5, 10, 40, 200:%s", g, -std::log2(h), early.c_str());
            info("g %.2f h 2^-%.0f: counts m0/m1 on T in [1e3, 1e6]:%s; slope %.3g vs rate %.3g (ratio %.4f)", g,
                 -std::log2(h), row.c_str(), slope, rate, slope / rate);
        }
    info("m0/m1 counts on T in [1e3, 1e6] differ by <= 1: %s", mass_late_ok ? "yes" : "no");
    verdict("overlap-counting", small_ok && slope_ok && mass_ok,
            fmt("T <= 5/2 members in {-1,0,1}: %s; slope within x4: %s; m1 vs m0 within 1: %s; %.0f s",
                small_ok ? "yes" : "no", slope_ok ? "yes" : "no", mass_ok ? "yes" : "no", seconds_since(t0)));
}

void model_degeneracy() {
    const auto t0 = std::chrono::steady_clock::now();
    const double w1 = airy_zero(1);
    const auto d = find_degenerate(1, w1);
    if (!d) {
        verdict("kg-degeneracy", false, "no degenerate point found");
        return;
    }
    const ModelDispersion disp{w1, 1};
    const double g2 = disp.d2g(d->eta0);
    const ModelDispersion d0{w1, 0};
    const double z_control = d0.dg(d->eta0);
    info("eta0 %.6f z0 %.6f phase'' %.1e; m = 0 control at z = g0'(eta0) = %.6f", d->eta0, d->z0, g2, z_control);
    auto fits = [&](double lo, double hi) {
        const auto ts = geometric_grid(lo, hi, 9);
        const auto p1 = decay_probe([&](double t) { return model_phase(1, w1, d->z0, t); }, ts, 1e-12);
        const auto p0 = decay_probe([&](double t) { return model_phase(0, w1, z_control, t); }, ts, 1e-12);
        return std::pair{p1.fit.exponent, p0.fit.exponent};
    };
    const auto [e1, e0] = fits(1e2, 1e4);
    const auto [l1, l0] = fits(1e4, 1e6);
    info("t in [1e2, 1e4]: m = 1 exponent %.4f, m = 0 exponent %.4f", e1, e0);
    info("t in [1e4, 1e6]: m = 1 exponent %.4f, m = 0 exponent %.4f", l1, l0);
    const double dt = seconds_since(t0);
    const bool ok = d->eta0 >= 0.5 && d->eta0 <= 1.5 && std::abs(g2) <= 1e-8 && std::abs(e1 - 1.0 / 3) <= 0.05 &&
                    std::abs(e0 - 0.5) <= 0.05 && dt < 120;
    verdict("kg-degeneracy", ok,
            fmt("eta0 %.4f in [1/2, 3/2], phase'' %.1e, m1 %.4f (1/3 +- 0.05), m0 %.4f (1/2 +- 0.05), %.1f s (< 120 s)",
                d->eta0, g2, e1, e0, dt));
}

void low_frequency_anomaly() {
    const auto t0 = std::chrono::steady_clock::now();
    LowFreqOptions opt;
    opt.J = 2;
    const double a = 1;
    const auto ts = geometric_grid(8, 512, 7);
    double e[2];
    for (int m : {0, 1}) {
        auto c = decay_scan_low(m, a, ts, opt);
        e[m] = fit_exponent(c, false).exponent;
        std::string row;
        for (std::size_t i = 0; i < ts.size(); ++i) row += fmt(" %.4e", c.sup_values[i]);
        info("m = %d sup at t = 8..512:%s; exponent %.4f", m, row.c_str(), e[m]);
    }
    const double dt = seconds_since(t0);
    const bool ok = std::abs(e[0] - 0.5) <= 0.1 && std::abs(e[1] - 1.0 / 3) <= 0.1 && e[0] - e[1] >= 0.1 && dt < 1800;
    verdict("low-frequency", ok,
            fmt("wave %.4f (1/2 +- 0.1), KG %.4f (1/3 +- 0.1), gap %.4f (>= 0.1), %.0f s (< 1800 s)", e[0], e[1],
                e[0] - e[1], dt));
}

void degenerate_mode() {
    const double w1 = airy_zero(1);
    const double f1 = kg_f(1, 0, 1.0);
    const double closed = 1 + w1 / 9 - 2 * w1 * w1 / 9;
    bool decreasing = true;
    double prev = kg_f(1, 0, 1e-3);
    for (int i = 2; i <= 3000; ++i) {
        const double v = kg_f(1, 0, 1e-3 * i);
        decreasing = decreasing && v < prev;
        prev = v;
    }
    const auto s = kg_degenerate_scan(0);
    info("f(1) %.6f, closed form %.6f", f1, closed);
    if (s) info("scan: k %d, root %.6f, candidates %d", s->k, s->z_star, s->candidates);
    const bool ok = f1 >= 0.04 && f1 <= 0.05 && std::abs(f1 - closed) < 1e-12 && decreasing && s && s->k == 1 &&
                    s->z_star > 1 && s->z_star < 1.05;
    verdict("degenerate-mode", ok,
            fmt("f(1) %.4f in [0.04, 0.05], decreasing on (0, 3]: %s, k %d, root %.4f", f1, decreasing ? "yes" : "no",
                s ? s->k : 0, s ? s->z_star : 0.0));
}

void property_suites() {
    const auto t0 = std::chrono::steady_clock::now();
    // Time reversal: G(-t) = conj G(t), V_{-N}(-t) = conj V_N(t).
    double tr = 0;
    for (double t : {0.7, 2.1}) {
        GreenQuery q;
        q.h = 1.0 / 64;
        q.t = t;
        q.y = -0.8 * t;
        auto r = q;
        r.t = -t;
        const auto g = green_high_freq(q).value;
        tr = std::max(tr, std::abs(std::conj(g) - green_high_freq(r).value) / std::abs(g));
        for (int N : {0, 1, -1}) {
            const auto v = wave_packet(N, q);
            tr = std::max(tr, std::abs(std::conj(v) - wave_packet(-N, r)) / std::max(1.0, std::abs(v)));
        }
    }
    const bool tr_ok = tr <= 1e-10;
    info("time reversal: max rel deviation %.1e", tr);

    // Analytic phase gradient against central differences.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> us(-2.5, 2.5), as(1.0, 7.0), es(0.6, 1.4), tt(0, 20), xs(0, 3);
    std::uniform_int_distribution<int> ns(-3, 3), ms(0, 1);
    double grad = 0;
    for (int i = 0; i < 100; ++i) {
        PhasePoint p{ns(rng), tt(rng), xs(rng), us(rng), us(rng), us(rng), as(rng), es(rng), 16};
        const PsiContext c{ms(rng), 1.0, 0.25, 1.0 / 128};
        const auto v = phase_psi(p, c);
        double* coord[4] = {&p.Upsilon, &p.S, &p.A, &p.eta};
        for (int j = 0; j < 4; ++j) {
            const double e = 1e-5, x0 = *coord[j];
            *coord[j] = x0 + e;
            const double up = phase_psi(p, c).value;
            *coord[j] = x0 - e;
            const double dn = phase_psi(p, c).value;
            *coord[j] = x0;
            const double fdv = (up - dn) / (2 * e);
            grad = std::max(grad, std::abs(fdv - v.grad[j]) / std::max(1.0, std::abs(v.grad[j])));
        }
    }
    const bool grad_ok = grad <= 1e-6;
    info("phase gradient vs finite differences: max rel %.1e over 100 points", grad);

    // sup_b sum_{k <= L} w_k^{-1/2} Ai^2(b - w_k) / L^{1/3}.
    std::vector<double> ratio;
    std::string row;
    for (int L : {8, 16, 32, 64, 128}) {
        double sup = 0;
        const double end = airy_zero(L) + 2;
        for (double b = -4; b <= end; b += 0.005) {
            double s = 0;
            for (int k = 1; k <= L; ++k) {
                const double w = airy_table().omega(k);
                s += std::pow(ai(b - w), 2) / std::sqrt(w);
            }
            sup = std::max(sup, s);
        }
        ratio.push_back(sup / std::cbrt(static_cast<double>(L)));
        row += fmt(" %.4f", ratio.back());
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    const bool airy_ok = *hi / *lo <= 1.5;
    info("Airy square sum / L^{1/3} at L = 8..128:%s (spread %.3f, bounded if <= 1.5)", row.c_str(), *hi / *lo);

    // Window sufficiency at the equivalence resolution.
    GreenQuery q;
    q.h = 1.0 / 128;
    q.t = 4.5;
    q.y = -4.5 * std::sqrt(1.25);
    const auto base = sum_reflected(q);
    const auto wide = sum_reflected(q, n_window(q.t, q.gamma, 1.5));
    const double dwin = std::abs(base.value - wide.value) / base.scale;
    const bool win_ok = dwin <= kWindowTol;
    info("window [%d, %d] -> [%d, %d]: change %.1e of sum |V_N| (<= %.0e)", base.window.lo, base.window.hi,
         wide.window.lo, wide.window.hi, dwin, kWindowTol);

    // Byte-identical reruns, also across thread counts.
    std::vector<double> ts;
    for (double t = 0.5; t <= 6; t += 0.25) ts.push_back(t);
    set_max_threads(1);
    const auto c1 = decay_scan_high(1, 1.0 / 64, 0.25, 0.25, ts);
    set_max_threads(0);
    const auto c2 = decay_scan_high(1, 1.0 / 64, 0.25, 0.25, ts);
    const auto c3 = decay_scan_high(1, 1.0 / 64, 0.25, 0.25, ts);
    auto same = [](const DecayCurve& x, const DecayCurve& y) {
        return x.sup_values.size() == y.sup_values.size() &&
               std::memcmp(x.sup_values.data(), y.sup_values.data(), x.sup_values.size() * sizeof(double)) == 0 &&
               x.argmax_points == y.argmax_points;
    };
    const bool det_ok = same(c1, c2) && same(c2, c3);
    info("reruns byte-identical: %s", det_ok ? "yes" : "no");

    verdict("property-suites", tr_ok && grad_ok && airy_ok && win_ok && det_ok,
            fmt("time reversal %s, gradient %s, Airy sum ratio %s, window %s, determinism %s, %.0f s",
                tr_ok ? "ok" : "FAIL", grad_ok ? "ok" : "FAIL", airy_ok ? "ok" : "FAIL", win_ok ? "ok" : "FAIL",
                det_ok ? "ok" : "FAIL", seconds_since(t0)));
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void()>>> all = {
        {"airy-zeros", airy_zeros_check},
        {"l-function", l_function_check},
        {"eigenmodes", eigenmode_check},
        {"airy-poisson", airy_poisson_identity},
        {"equivalence", representation_equivalence},
        {"reflection-peaks", reflection_peaks},
        {"overlap-counting", overlap_counting},
        {"kg-degeneracy", model_degeneracy},
        {"low-frequency", low_frequency_anomaly},
        {"degenerate-mode", degenerate_mode},
        {"property-suites", property_suites},
    };
    std::set<std::string> only(argv + 1, argv + argc);
    std::printf("fdwave %s acceptance\n", kVersion);
    const auto t0 = std::chrono::steady_clock::now();
    int ran = 0;
    for (const auto& [name, fn] : all) {
        if (!only.empty() && !only.count(name)) continue;
        ++ran;
        try {
            fn();
        } catch (const std::exception& e) {
            verdict(name, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d of %d criteria passed in %.0f s\n", ran - failures, ran, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
