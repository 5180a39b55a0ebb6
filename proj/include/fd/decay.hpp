#pragma once

// Sup-norm scans of the localized Green functions, power-law fits, and
// reflection-peak bookkeeping.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fd/green.hpp"
#include "fd/parallel.hpp"
#include "fd/quadrature.hpp"

namespace fd {

// Coarse lattice plus the finer lattice used by the refinement pass. Coarse
// points are every `ratio`-th fine point, so both passes share x values.
struct GridSpec {
    double x_lo = 0, x_hi = 0.5, x_fine = 0.25 / 64;
    double y_lo = -1, y_hi = 0, y_fine = 0.01;
    int x_ratio = 8;
    int y_ratio = 4;
    int refine_cells = 2;  // refinement box half-width, in coarse cells

    double x_step() const { return x_fine * x_ratio; }
    double y_step() const { return y_fine * y_ratio; }
};

// x in [0, 2a] at a/8 (refined to a/64); y over the cone
// [-(1+gamma) t - 4 gamma^{3/2}, 0] at min(gamma^{3/2}, h t)/2 (refined /4).
inline GridSpec high_freq_grid(double a, double gamma, double h, double t) {
    if (!(a > 0) || !(gamma > 0) || !(h > 0)) throw ArgumentError("high_freq_grid: positive parameters required");
    GridSpec g;
    g.x_lo = 0;
    g.x_hi = 2 * a;
    g.x_fine = a / 64;
    g.x_ratio = 8;
    const double g32 = std::pow(gamma, 1.5);
    g.y_lo = -(1 + gamma) * std::abs(t) - 4 * g32;
    g.y_hi = 0;
    const double dy = std::min(g32, h * std::max(std::abs(t), 1.0));
    g.y_fine = dy / 8;
    g.y_ratio = 4;
    return g;
}

// x in [0, 2a], y in [-(speed t + 4), 0] on a 1/4 lattice (refined to 1/32).
inline GridSpec low_freq_grid(double a, double t, double speed = 2) {
    if (!(a > 0)) throw ArgumentError("low_freq_grid: a must be positive");
    if (!(speed > 0)) throw ArgumentError("low_freq_grid: speed must be positive");
    GridSpec g;
    g.x_lo = 0;
    g.x_hi = 2 * a;
    const int nx = std::max(2, static_cast<int>(std::ceil(2 * a / 0.25)));
    g.x_fine = 2 * a / (8 * nx);
    g.x_ratio = 8;
    g.y_lo = -(speed * std::abs(t) + 4);
    g.y_hi = 0;
    g.y_fine = 1.0 / 32;
    g.y_ratio = 8;
    return g;
}

struct ScanResult {
    double sup = 0;
    double x = 0, y = 0;
    long points = 0;
    bool resolution_warning = false;  // refined argmax on the edge of the refinement box
};

namespace detail {

inline std::vector<double> lattice(double lo, double step, long first, long last, long stride) {
    std::vector<double> v;
    for (long i = first; i <= last; i += stride) v.push_back(lo + static_cast<double>(i) * step);
    return v;
}

}  // namespace detail

inline ScanResult sup_scan(const SpectralProfile& profile, double t, const GridSpec& g) {
    if (!(g.x_fine > 0) || !(g.y_fine > 0) || g.x_ratio < 1 || g.y_ratio < 1 || g.x_hi < g.x_lo || g.y_hi < g.y_lo)
        throw ArgumentError("sup_scan: bad grid");
    const long nxf = static_cast<long>(std::floor((g.x_hi - g.x_lo) / g.x_fine + 1e-9));
    const long nyf = static_cast<long>(std::floor((g.y_hi - g.y_lo) / g.y_fine + 1e-9));
    ScanResult out;
    long bx = 0, by = 0;
    auto run = [&](long x0, long x1, long sx, long y0, long y1, long sy) {
        const auto xs = detail::lattice(g.x_lo, g.x_fine, x0, x1, sx);
        const auto ys = detail::lattice(g.y_lo, g.y_fine, y0, y1, sy);
        const auto v = profile.evaluate(t, xs, ys);
        out.points += static_cast<long>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double m = std::abs(v[i].value);
            if (m > out.sup) {
                out.sup = m;
                bx = x0 + static_cast<long>(i / ys.size()) * sx;
                by = y0 + static_cast<long>(i % ys.size()) * sy;
            }
        }
    };
    run(0, nxf, g.x_ratio, 0, nyf, g.y_ratio);
    const long rx = static_cast<long>(g.refine_cells) * g.x_ratio, ry = static_cast<long>(g.refine_cells) * g.y_ratio;
    const long x0 = std::max(0L, bx - rx), x1 = std::min(nxf, bx + rx);
    const long y0 = std::max(0L, by - ry), y1 = std::min(nyf, by + ry);
    run(x0, x1, 1, y0, y1, 1);
    out.x = g.x_lo + static_cast<double>(bx) * g.x_fine;
    out.y = g.y_lo + static_cast<double>(by) * g.y_fine;
    out.resolution_warning = (bx == x0 && x0 > 0) || (bx == x1 && x1 < nxf) || (by == y0 && y0 > 0) ||
                             (by == y1 && y1 < nyf);
    return out;
}

inline ScanResult sup_scan(int m, double h, double a, double gamma, double t, std::optional<GridSpec> grid = {}) {
    const GridSpec g = grid.value_or(high_freq_grid(a, gamma, h, t));
    const SpectralProfile p =
        high_freq_profile(m, h, a, gamma, std::abs(t), std::max(std::abs(g.y_lo), std::abs(g.y_hi)));
    return sup_scan(p, t, g);
}

struct Peak {
    double t;
    double height;
};

struct DecayCurve {
    std::vector<double> t_values;
    std::vector<double> sup_values;
    std::vector<std::pair<double, double>> argmax_points;
    std::vector<GridSpec> grids;
    std::vector<bool> warnings;
    double fitted_exponent = 0;
    double fit_residual = 0;
    std::vector<Peak> peaks;
};

// Interior local maxima; each is refined by the vertex of the parabola
// through its two neighbours.
inline std::vector<Peak> detect_peaks(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size()) throw ArgumentError("detect_peaks: length mismatch");
    std::vector<Peak> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
        const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
        const double d1 = (v[i] - v[i - 1]) / (t1 - t0), d2 = (v[i + 1] - v[i]) / (t2 - t1);
        const double c2 = (d2 - d1) / (t2 - t0);
        if (!(c2 < 0)) {
            out.push_back({t1, v[i]});
            continue;
        }
        // Newton form v0 + d1 (t - t0) + c2 (t - t0)(t - t1).
        const double tv = std::clamp(0.5 * (t0 + t1) - d1 / (2 * c2), t0, t2);
        const double hv = v[i - 1] + d1 * (tv - t0) + c2 * (tv - t0) * (tv - t1);
        out.push_back({tv, std::max(v[i], hv)});
    }
    return out;
}

// Peaks that stand above every later sample of the curve. Sub-peaks riding
// on a reflection shoulder drop out, so the heights are non-increasing.
inline std::vector<Peak> envelope_peaks(const std::vector<Peak>& peaks, const std::vector<double>& t,
                                        const std::vector<double>& v) {
    std::vector<Peak> out;
    for (const auto& p : peaks) {
        bool top = true;
        for (std::size_t i = 0; i < t.size() && top; ++i)
            if (t[i] > p.t && v[i] > p.height) top = false;
        for (const auto& q : peaks)
            if (q.t > p.t && q.height > p.height) top = false;
        if (top) out.push_back(p);
    }
    return out;
}

struct ExponentFit {
    double exponent = 0;
    double residual = 0;
    double constant = 0;
    bool degenerate = false;
};

inline ExponentFit fit_exponent(const std::vector<double>& t, const std::vector<double>& v) {
    ExponentFit out;
    if (std::all_of(v.begin(), v.end(), [&](double s) { return s == v.front(); })) {
        out.degenerate = true;
        return out;
    }
    const PowerFit f = fit_power_law(t, v);
    return {f.exponent, f.residual, f.constant, false};
}

inline ExponentFit fit_exponent(DecayCurve& curve, bool use_peaks_only) {
    ExponentFit f;
    if (use_peaks_only) {
        if (curve.peaks.empty()) curve.peaks = detect_peaks(curve.t_values, curve.sup_values);
        const auto env = envelope_peaks(curve.peaks, curve.t_values, curve.sup_values);
        if (env.size() < 4) throw ArgumentError("fit_exponent: need at least 4 envelope peaks");
        std::vector<double> t, v;
        for (const auto& p : env) {
            t.push_back(p.t);
            v.push_back(p.height);
        }
        f = fit_exponent(t, v);
    } else {
        if (curve.t_values.size() < 6) throw ArgumentError("fit_exponent: need at least 6 samples");
        f = fit_exponent(curve.t_values, curve.sup_values);
    }
    curve.fitted_exponent = f.exponent;
    curve.fit_residual = f.residual;
    return f;
}

// Runs sup_scan at every t against one profile built for the largest t.
template <class GridFn>
DecayCurve scan_curve(const SpectralProfile& profile, const std::vector<double>& t_values, GridFn&& grid_for) {
    DecayCurve c;
    c.t_values = t_values;
    std::vector<ScanResult> res(t_values.size());
    c.grids.resize(t_values.size());
    for (std::size_t i = 0; i < t_values.size(); ++i) c.grids[i] = grid_for(t_values[i]);
    parallel_for(t_values.size(), [&](std::size_t i) { res[i] = sup_scan(profile, t_values[i], c.grids[i]); });
    for (const auto& r : res) {
        c.sup_values.push_back(r.sup);
        c.argmax_points.emplace_back(r.x, r.y);
        c.warnings.push_back(r.resolution_warning);
    }
    c.peaks = detect_peaks(c.t_values, c.sup_values);
    return c;
}

inline DecayCurve decay_scan_high(int m, double h, double a, double gamma, const std::vector<double>& t_values) {
    if (t_values.empty()) throw ArgumentError("decay_scan_high: no times");
    const double tmax = std::abs(*std::max_element(t_values.begin(), t_values.end(),
                                                   [](double u, double v) { return std::abs(u) < std::abs(v); }));
    const double ymax = (1 + gamma) * tmax + 4 * std::pow(gamma, 1.5);
    const SpectralProfile p = high_freq_profile(m, h, a, gamma, tmax, ymax);
    return scan_curve(p, t_values, [&](double t) { return high_freq_grid(a, gamma, h, t); });
}

inline DecayCurve decay_scan_low(int m, double a, const std::vector<double>& t_values, const LowFreqOptions& opt = {}) {
    if (t_values.empty()) throw ArgumentError("decay_scan_low: no times");
    double tmax = 0;
    for (double t : t_values) tmax = std::max(tmax, std::abs(t));
    const double speed = low_freq_max_speed(m, opt);
    const SpectralProfile p = low_freq_profile(m, a, tmax, speed * tmax + 4, opt);
    return scan_curve(p, t_values, [&](double t) { return low_freq_grid(a, t, speed); });
}

inline double peak_time_cap(double a, double h) { return std::sqrt(a) / std::cbrt(h); }

// 4 n sqrt(a) sqrt(1+a), n = 1..n_max. With h given, n beyond sqrt(a)/h^{1/3}
// adds a warning.
inline std::vector<double> peak_times(double a, int n_max, std::optional<double> h = {},
                                      std::vector<std::string>* warnings = nullptr) {
    if (!(a > 0)) throw ArgumentError("peak_times: a must be positive");
    if (n_max < 0) throw ArgumentError("peak_times: n_max must be >= 0");
    if (h && warnings && n_max > peak_time_cap(a, *h))
        warnings->push_back("peak_times: n_max = " + std::to_string(n_max) + " exceeds sqrt(a)/h^{1/3} = " +
                            std::to_string(peak_time_cap(a, *h)));
    std::vector<double> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(4 * n * std::sqrt(a) * std::sqrt(1 + a));
    return out;
}

enum class DecayRegime { free, finite_lattice, n_below_lambda, n_below_lambda2, spectral_overlap };

struct RegimeInfo {
    DecayRegime regime;
    const char* label;
    double exponent;
    double envelope;  // predicted size of |G| up to a constant
};

inline const char* regime_label(DecayRegime r) {
    switch (r) {
        case DecayRegime::free: return "free";
        case DecayRegime::finite_lattice: return "finite-N lattice";
        case DecayRegime::n_below_lambda: return "N in (lambda^{1/3}, lambda)";
        case DecayRegime::n_below_lambda2: return "N in (lambda, lambda^2)";
        default: return "spectral-overlap";
    }
}

inline RegimeInfo regime_classifier(double t, double a, double gamma, double h) {
    if (!(t > 0) || !(a > 0) || !(gamma > 0) || !(h > 0))
        throw ArgumentError("regime_classifier: positive parameters required");
    const double lam = std::pow(a, 1.5) / h, base = 1 / (h * h), q = h / t;
    auto info = [&](DecayRegime r, double e, double env) { return RegimeInfo{r, regime_label(r), e, env}; };
    if (t <= std::sqrt(a)) return info(DecayRegime::free, 0.5, base * std::sqrt(q));
    if (t <= a / std::cbrt(h)) return info(DecayRegime::finite_lattice, 0.25, base * std::pow(q * a, 0.25));
    if (t < a * a / h) return info(DecayRegime::n_below_lambda, 0.25, base * std::pow(q * a, 0.25));
    if (t < std::pow(a, 3.5) / (h * h)) return info(DecayRegime::n_below_lambda2, 1.0 / 3, base * std::cbrt(q));
    return info(DecayRegime::spectral_overlap, 1.0 / 3, base * std::sqrt(q) * std::cbrt(lam));
}

// max over the curve of sup / envelope.
inline double envelope_constant(const DecayCurve& c, double a, double gamma, double h) {
    double C = 0;
    for (std::size_t i = 0; i < c.t_values.size(); ++i)
        C = std::max(C, c.sup_values[i] / regime_classifier(c.t_values[i], a, gamma, h).envelope);
    return C;
}

}  // namespace fd
