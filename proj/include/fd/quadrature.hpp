#pragma once

// Gauss-Legendre panels, adaptive bisection, and the oscillatory-integral
// engine: phase-aware subdivision, stationary points, decay exponents.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "fd/errors.hpp"

namespace fd {

template <int N>
struct GaussLegendre {
    std::array<double, N> x{};
    std::array<double, N> w{};
    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = z;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = N * (z * p1 - p0) / (z * z - 1);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) {
                    x[static_cast<std::size_t>(i)] = z;
                    w[static_cast<std::size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
                    break;
                }
            }
        }
    }
};

inline const GaussLegendre<15>& gl15() {
    static const GaussLegendre<15> rule;
    return rule;
}

template <class F>
auto gauss_panel(F&& f, double a, double b) {
    const auto& r = gl15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using T = decltype(f(c));
    T sum{};
    for (std::size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * f(c + h * r.x[i]);
    return sum * h;
}

// Fixed composite rule with equal panels.
template <class F>
auto gauss_composite(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    using T = decltype(f(a));
    T sum{};
    for (int p = 0; p < panels; ++p) sum += gauss_panel(f, a + p * h, a + (p + 1) * h);
    return sum;
}

template <class T>
struct QuadResult {
    T value{};
    double error = 0;
    long evaluations = 0;
    bool converged = true;
};

// Adaptive bisection: a panel is accepted when its GL15 value and the sum over
// its halves agree to the panel's share of tol. Depth-first, left to right, so
// the summation order is deterministic.
inline constexpr long kMaxEvaluations = 4'000'000;

template <class F>
auto integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 48, int initial_panels = 1) {
    using T = decltype(f(a));
    QuadResult<T> out;
    if (a == b) return out;
    const double width = std::abs(b - a);
    struct Panel {
        double lo, hi;
        T whole;
        int depth;
    };
    std::vector<Panel> stack;
    const int n0 = std::max(1, initial_panels);
    for (int i = n0 - 1; i >= 0; --i) {
        const double lo = a + (b - a) * i / n0, hi = a + (b - a) * (i + 1) / n0;
        stack.push_back({lo, hi, gauss_panel(f, lo, hi), 0});
    }
    out.evaluations += 15L * n0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const T left = gauss_panel(f, p.lo, mid);
        const T right = gauss_panel(f, mid, p.hi);
        out.evaluations += 30;
        const double err = std::abs(left + right - p.whole);
        // Rounding floor: a panel whose halves agree to a few ulps of its value
        // cannot be improved by further bisection.
        const double local = std::max(tol * std::abs(p.hi - p.lo) / width, 1e-15 * std::abs(left + right));
        if (err <= local || p.depth >= max_depth || out.evaluations > kMaxEvaluations) {
            if (err > local) out.converged = false;
            out.value += left + right;
            out.error += err;
            continue;
        }
        stack.push_back({mid, p.hi, right, p.depth + 1});
        stack.push_back({p.lo, mid, left, p.depth + 1});
    }
    return out;
}

// One-dimensional oscillatory integral  int amplitude(s) exp(i lambda phase(s)) ds.
struct PhaseSpec {
    std::function<double(double)> phase;
    std::function<double(double)> dphase;
    std::function<double(double)> d2phase;
    std::function<std::complex<double>(double)> amplitude;
    double lo = 0;
    double hi = 1;
    double lambda = 1;
};

// Largest relative mismatch between the derivative callbacks and central
// differences over an n-point interior sample.
inline double derivative_mismatch(const PhaseSpec& s, int n = 50) {
    double worst = 0;
    for (int i = 1; i <= n; ++i) {
        const double x = s.lo + (s.hi - s.lo) * i / (n + 1.0);
        const double e = 1e-5 * std::max(1.0, std::abs(x));
        const double fd1 = (s.phase(x + e) - s.phase(x - e)) / (2 * e);
        const double fd2 = (s.dphase(x + e) - s.dphase(x - e)) / (2 * e);
        const double d1 = s.dphase(x), d2 = s.d2phase(x);
        worst = std::max(worst, std::abs(fd1 - d1) / std::max(1.0, std::abs(d1)));
        worst = std::max(worst, std::abs(fd2 - d2) / std::max(1.0, std::abs(d2)));
    }
    return worst;
}

namespace detail {

// Split [lo, hi] until lambda |phase'| * width <= pi/2 on every panel, judged
// at both ends and the midpoint.
inline void phase_panels(const PhaseSpec& s, double lo, double hi, std::vector<double>& cuts,
                         int depth = 0) {
    const double mid = 0.5 * (lo + hi);
    const double rate =
        s.lambda * std::max({std::abs(s.dphase(lo)), std::abs(s.dphase(mid)), std::abs(s.dphase(hi))});
    if (rate * (hi - lo) > std::numbers::pi / 2 && depth < 40) {
        phase_panels(s, lo, mid, cuts, depth + 1);
        phase_panels(s, mid, hi, cuts, depth + 1);
        return;
    }
    cuts.push_back(hi);
}

}  // namespace detail

inline QuadResult<std::complex<double>> integrate_oscillatory_result(const PhaseSpec& s, double tol) {
    if (!(tol > 0)) throw ArgumentError("integrate_oscillatory: tol must be positive");
    if (!(s.hi > s.lo)) throw ArgumentError("integrate_oscillatory: empty interval");
    std::vector<double> cuts{s.lo};
    detail::phase_panels(s, s.lo, s.hi, cuts);
    auto f = [&](double x) { return s.amplitude(x) * std::polar(1.0, s.lambda * s.phase(x)); };
    QuadResult<std::complex<double>> out;
    const double width = s.hi - s.lo;
    // lambda * phase carries a rounding error of about eps |lambda phase|, which
    // bounds the attainable accuracy per panel.
    double phase_max = 0, amp_max = 0;
    for (int i = 0; i <= 64; ++i) {
        const double x = s.lo + width * i / 64;
        phase_max = std::max(phase_max, std::abs(s.lambda * s.phase(x)));
        amp_max = std::max(amp_max, std::abs(s.amplitude(x)));
    }
    const double floor_density = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, phase_max) * amp_max;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double share = std::max(tol * (cuts[i + 1] - cuts[i]) / width, floor_density * (cuts[i + 1] - cuts[i]));
        const auto r = integrate_adaptive(f, cuts[i], cuts[i + 1], share, 30);
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

inline std::complex<double> integrate_oscillatory(const PhaseSpec& s, double tol) {
    const auto r = integrate_oscillatory_result(s, tol);
    if (!r.converged)
        throw AccuracyError("integrate_oscillatory: maximum subdivision depth reached", std::abs(r.value),
                            r.error);
    return r.value;
}

struct StationaryPoint {
    double location;
    int order;  // 1: phase'' != 0; 2: degenerate
};

struct StationaryOptions {
    int scan_points = 4000;
    double degenerate_tol = 1e-6;  // relative to max |phase''| on the interval
    double double_root_tol = 1e-9; // |phase'| relative to max |phase'| at a phase'' root
};

namespace detail {

template <class F>
double bisect_root(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Roots of phase' on the interval. Sign changes give simple and odd-order
// roots; double roots (no sign change) are found at roots of phase'' where
// |phase'| is at rounding level.
inline std::vector<StationaryPoint> stationary_points(const PhaseSpec& s, StationaryOptions opt = {}) {
    const int n = opt.scan_points;
    std::vector<double> xs(static_cast<std::size_t>(n + 1)), d1(xs.size()), d2(xs.size());
    double max1 = 0, max2 = 0;
    for (int i = 0; i <= n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        xs[u] = s.lo + (s.hi - s.lo) * i / n;
        d1[u] = s.dphase(xs[u]);
        d2[u] = s.d2phase(xs[u]);
        max1 = std::max(max1, std::abs(d1[u]));
        max2 = std::max(max2, std::abs(d2[u]));
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (d1[i] == 0) {
            roots.push_back(xs[i]);
        } else if ((d1[i] > 0) != (d1[i + 1] > 0) && d1[i + 1] != 0) {
            roots.push_back(detail::bisect_root(s.dphase, xs[i], xs[i + 1]));
        }
    }
    if (d1.back() == 0) roots.push_back(xs.back());
    const double spacing = (s.hi - s.lo) / n;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if ((d2[i] > 0) == (d2[i + 1] > 0)) continue;
        const double r = detail::bisect_root(s.d2phase, xs[i], xs[i + 1]);
        if (std::abs(s.dphase(r)) > opt.double_root_tol * std::max(max1, 1e-300)) continue;
        const bool known = std::any_of(roots.begin(), roots.end(),
                                       [&](double q) { return std::abs(q - r) < 2 * spacing; });
        if (!known) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<StationaryPoint> out;
    for (double r : roots) {
        const bool degenerate = std::abs(s.d2phase(r)) < opt.degenerate_tol * max2;
        out.push_back({r, degenerate ? 2 : 1});
    }
    return out;
}

struct PowerFit {
    double exponent;  // rho in value ~ constant * t^{-rho}
    double residual;  // RMS of log residuals
    double constant;
};

inline PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size() || t.size() < 2) throw ArgumentError("fit_power_law: need matching samples");
    const double n = static_cast<double>(t.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0) || !(v[i] > 0)) throw ArgumentError("fit_power_law: samples must be positive");
        const double x = std::log(t[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0) throw ArgumentError("fit_power_law: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = std::log(v[i]) - icpt - slope * std::log(t[i]);
        rss += r * r;
    }
    return {-slope, std::sqrt(rss / n), std::exp(icpt)};
}

struct DecayProbe {
    PowerFit fit;
    std::vector<double> t;
    std::vector<double> magnitude;
    bool underflow = false;
};

// Fit |integral(family(t))| ~ t^{-rho} over a geometric t list.
inline DecayProbe decay_probe(const std::function<PhaseSpec(double)>& family, const std::vector<double>& t_list,
                              double tol = 1e-13) {
    if (t_list.size() < 6) throw ArgumentError("decay_probe: need at least 6 times");
    DecayProbe out;
    out.t = t_list;
    for (double t : t_list) {
        const double m = std::abs(integrate_oscillatory(family(t), tol));
        if (m < 1e-14) out.underflow = true;
        out.magnitude.push_back(std::max(m, 1e-300));
    }
    out.fit = fit_power_law(out.t, out.magnitude);
    return out;
}

inline std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo > 0) || !(hi > lo)) throw ArgumentError("geometric_grid: bad range");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (count - 1.0));
    return g;
}

}  // namespace fd
