#pragma once

// Spectral sums for the frequency-localized Green functions of the wave and
// Klein-Gordon flows, and the one-dimensional model integral v(z, t).
//
// High frequency (d = 2):
//   G(t,x,a,y) = sum_k int e^{i t sqrt(m^2 + lambda_k(eta/h))} e^{i y eta/h}
//                psi1(|eta|) psi1(h sqrt(lambda_k)) psi2(h^{2/3} w_k / (|eta|^{2/3} gamma))
//                e_k(x, eta/h) e_k(a, eta/h) d eta / h
// over eta in R; the symbol depends on |eta| only, so the eta < 0 half is the
// eta > 0 half at -y.
//
// Low frequency: the rotation-invariant sum over theta in R^{d-1}, written in
// polar form with the angular integral as a kernel K_d(rho |y|).

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "fd/cutoff.hpp"
#include "fd/modes.hpp"
#include "fd/parallel.hpp"
#include "fd/quadrature.hpp"
#include "fd/spectral_phase.hpp"

namespace fd {

struct GreenQuery {
    int m = 0;
    double h = 1.0 / 128;
    double a = 0.25;
    double gamma = 0.25;
    double t = 0;
    double x = 0.25;
    double y = 0;
    int kmax = 0;       // 0: derived from the cutoff window
    double tol = 1e-10; // relative to the L1 size of the symbol
};

struct FieldValue {
    std::complex<double> value{};
    int mode_count = 0;
    double error_estimate = 0;
    bool empty_window = false;
};

struct ModeWindow {
    int first = 1;
    int last = 0;  // inclusive; last < first when empty
    bool empty() const { return last < first; }
    int size() const { return empty() ? 0 : last - first + 1; }
};

namespace detail {

inline void check_mass(int m) {
    if (m != 0 && m != 1) throw ArgumentError("mass m must be 0 or 1");
}

inline void check_high_freq(const GreenQuery& q) {
    check_mass(q.m);
    if (!(q.h > 0 && q.h <= 0.5)) throw ArgumentError("h must lie in (0, 1/2]");
    if (!(q.a > 0)) throw ArgumentError("a must be positive");
    if (!(q.gamma > 0)) throw ArgumentError("gamma must be positive");
    if (!(q.x >= 0)) throw DomainError("x must be >= 0");
    if (!std::isfinite(q.t) || !std::isfinite(q.y)) throw DomainError("t and y must be finite");
}

// sqrt(m^2 h^2 + eta^2 + w h^{2/3} eta^{4/3}) and its first two eta-derivatives.
struct DispersionHF {
    double mh2, wc;  // m^2 h^2, w_k h^{2/3}
    double g(double e) const { return std::sqrt(mh2 + e * e + wc * std::pow(e, 4.0 / 3.0)); }
    double dg(double e) const { return (e + 2.0 / 3.0 * wc * std::cbrt(e)) / g(e); }
    double d2g(double e) const {
        const double gv = g(e), d = dg(e);
        return (1 + 2.0 / 9.0 * wc / std::cbrt(e * e) - d * d) / gv;
    }
};

}  // namespace detail

// Modes whose psi2 factor can be non-zero for some eta in [1/2, 3/2], plus two
// guard modes on each side.
inline ModeWindow high_freq_modes(double h, double gamma) {
    if (!(h > 0) || !(gamma > 0)) throw ArgumentError("high_freq_modes: h and gamma must be positive");
    const double scale = gamma / std::cbrt(h * h);
    const double lo = 0.75 * scale * std::cbrt(0.25);
    const double hi = 2.0 * scale * std::cbrt(2.25);
    const auto& table = airy_table();
    if (hi >= table.zeros().back()) throw RangeError("high_freq_modes: window exceeds the Airy table");
    const int below = table.count_below(lo);
    const int upto = table.count_below(hi);
    if (upto == below) return {1, 0};
    return {std::max(1, below + 1 - 2), upto + 2};
}

// Real symbol of mode k at eta > 0, without the oscillating exponential.
inline double high_freq_symbol(int k, double eta, double x, double a, double h, double gamma) {
    const double w = airy_table().omega(k);
    const double alpha = std::cbrt(h * h) * w / std::cbrt(eta * eta);
    const double cut = cutoffs::psi1(eta) * cutoffs::psi1(eta * std::sqrt(1 + alpha)) * cutoffs::psi2(alpha / gamma);
    if (cut == 0) return 0;
    const double theta = eta / h;
    const auto e = eigenmode(k, theta);
    return cut * e(x) * e(a) / h;
}

inline FieldValue green_high_freq(const GreenQuery& q) {
    detail::check_high_freq(q);
    FieldValue out;
    ModeWindow win = high_freq_modes(q.h, q.gamma);
    if (win.empty()) {
        out.empty_window = true;
        return out;
    }
    if (q.kmax > 0) win.last = std::min(win.last, q.kmax);
    const double h23 = std::cbrt(q.h * q.h);
    // Absolute tolerance from the L1 size of the symbol.
    double scale = 0;
    for (int k = win.first; k <= win.last; ++k)
        scale += gauss_composite(
            [&](double e) { return std::abs(high_freq_symbol(k, e, q.x, q.a, q.h, q.gamma)); }, 0.5, 1.5, 32);
    if (scale == 0) {
        out.mode_count = win.size();
        return out;
    }
    const double abs_tol = q.tol * scale;
    const int modes = win.size();
    for (int k = win.first; k <= win.last; ++k) {
        const detail::DispersionHF disp{q.m * q.m * q.h * q.h, airy_table().omega(k) * h23};
        for (double sy : {1.0, -1.0}) {
            const double y = sy * q.y;
            PhaseSpec spec;
            spec.phase = [&, y](double e) { return q.t * disp.g(e) + y * e; };
            spec.dphase = [&, y](double e) { return q.t * disp.dg(e) + y; };
            spec.d2phase = [&](double e) { return q.t * disp.d2g(e); };
            spec.amplitude = [&, k](double e) {
                return std::complex<double>(high_freq_symbol(k, e, q.x, q.a, q.h, q.gamma));
            };
            spec.lo = 0.5;
            spec.hi = 1.5;
            spec.lambda = 1 / q.h;
            const auto r = integrate_oscillatory_result(spec, abs_tol / (2 * modes));
            if (!r.converged)
                throw AccuracyError("green_high_freq: eta quadrature did not converge", std::abs(r.value), r.error);
            out.value += r.value;
            out.error_estimate += r.error;
        }
    }
    out.mode_count = modes;
    return out;
}

// A sum  G(y) = 2 sum_k int C_k(x, s) e^{i t g_k(s)} cos(kappa y s) ds
// evaluated for many (x, y) at once by the trapezoid rule on a uniform grid in
// s; the integrands are smooth and vanish to all orders at both ends, so the
// rule converges spectrally. Half-grid sums give the error estimate.
class SpectralProfile {
public:
    struct Sample {
        std::complex<double> value;
        double error;
    };

    // symbol(k, s, x) is the real C_k; phase(k, s) and dphase(k, s) give g_k.
    SpectralProfile(ModeWindow modes, double lo, double hi, double kappa, double t_max, double y_max,
                    std::function<double(int, double, double)> symbol,
                    std::function<double(int, double)> phase, std::function<double(int, double)> dphase,
                    int min_nodes = 256)
        : modes_(modes), lo_(lo), kappa_(kappa), symbol_(std::move(symbol)) {
        if (modes.empty()) throw ArgumentError("SpectralProfile: empty mode window");
        double gmax = 0;
        for (int k = modes.first; k <= modes.last; ++k)
            for (int i = 0; i <= 64; ++i) gmax = std::max(gmax, std::abs(dphase(k, lo + (hi - lo) * i / 64)));
        // Bandwidth of the integrand in s; the half grid must still resolve it.
        const double band = std::abs(t_max) * gmax + kappa * std::abs(y_max);
        const double pad = 2000;
        int n = static_cast<int>(std::ceil((hi - lo) * (2 * band + pad) / (2 * std::numbers::pi)));
        n = std::max(n, min_nodes);
        n += n % 2;
        nodes_ = n;
        step_ = (hi - lo) / n;
        phase_.resize(static_cast<std::size_t>(modes.size()) * (n + 1));
        for (int k = modes.first; k <= modes.last; ++k)
            for (int l = 0; l <= n; ++l) phase_[index(k, l)] = phase(k, lo + l * step_);
    }

    int nodes() const { return nodes_; }
    double step() const { return step_; }
    const ModeWindow& modes() const { return modes_; }

    // Values at every (x, y) pair of the given lists; result is row-major in x.
    std::vector<Sample> evaluate(double t, const std::vector<double>& xs, const std::vector<double>& ys) const {
        const int n = nodes_;
        const auto K = static_cast<std::size_t>(modes_.size());
        std::vector<std::complex<double>> phasor(K * (n + 1));
        for (std::size_t i = 0; i < phasor.size(); ++i) phasor[i] = std::polar(1.0, t * phase_[i]);
        std::vector<Sample> out(xs.size() * ys.size());
        std::vector<std::complex<double>> f(static_cast<std::size_t>(n + 1));
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const auto table = symbols(xs[ix]);
            for (int l = 0; l <= n; ++l) {
                std::complex<double> acc{};
                for (std::size_t kk = 0; kk < K; ++kk) {
                    const std::size_t at = kk * (n + 1) + static_cast<std::size_t>(l);
                    acc += (*table)[at] * phasor[at];
                }
                f[static_cast<std::size_t>(l)] = acc;
            }
            for (std::size_t iy = 0; iy < ys.size(); ++iy) out[ix * ys.size() + iy] = transform(f, ys[iy]);
        }
        return out;
    }

private:
    std::size_t index(int k, int l) const {
        return static_cast<std::size_t>(k - modes_.first) * (nodes_ + 1) + static_cast<std::size_t>(l);
    }

    std::shared_ptr<const std::vector<double>> symbols(double x) const {
        {
            std::lock_guard<std::mutex> lock(cache_lock_);
            if (auto it = cache_.find(x); it != cache_.end()) return it->second;
        }
        auto table = std::make_shared<std::vector<double>>(phase_.size());
        for (int k = modes_.first; k <= modes_.last; ++k)
            for (int l = 1; l < nodes_; ++l) (*table)[index(k, l)] = symbol_(k, lo_ + l * step_, x);
        std::lock_guard<std::mutex> lock(cache_lock_);
        return cache_.emplace(x, std::move(table)).first->second;
    }

    // 2 sum_l f_l cos(kappa y s_l) step, and the same on the even nodes.
    Sample transform(const std::vector<std::complex<double>>& f, double y) const {
        const double w = kappa_ * y;
        const std::complex<double> rot = std::polar(1.0, w * step_);
        std::complex<double> z = std::polar(1.0, w * lo_);
        std::complex<double> full{}, half{};
        for (int l = 0; l <= nodes_; ++l) {
            if (l % 256 == 0) z = std::polar(1.0, w * (lo_ + l * step_));
            const std::complex<double> term = f[static_cast<std::size_t>(l)] * z.real();
            full += term;
            if (l % 2 == 0) half += term;
            z *= rot;
        }
        full *= 2 * step_;
        half *= 4 * step_;
        return {full, std::abs(full - half)};
    }

    ModeWindow modes_;
    double lo_, kappa_;
    std::function<double(int, double, double)> symbol_;
    int nodes_ = 0;
    double step_ = 0;
    std::vector<double> phase_;
    mutable std::mutex cache_lock_;
    mutable std::map<double, std::shared_ptr<const std::vector<double>>> cache_;
};

// Batched form of green_high_freq for fixed (m, h, a, gamma), valid for
// |t| <= t_max and |y| <= y_max.
inline SpectralProfile high_freq_profile(int m, double h, double a, double gamma, double t_max, double y_max) {
    GreenQuery q;
    q.m = m;
    q.h = h;
    q.a = a;
    q.gamma = gamma;
    detail::check_high_freq(q);
    const ModeWindow win = high_freq_modes(h, gamma);
    if (win.empty()) throw RegimeError("high_freq_profile: empty cutoff window");
    const double h23 = std::cbrt(h * h);
    auto disp = [m, h, h23](int k) { return detail::DispersionHF{m * m * h * h, airy_table().omega(k) * h23}; };
    return SpectralProfile(
        win, 0.5, 1.5, 1 / h, t_max / h, y_max,
        [=](int k, double e, double x) { return high_freq_symbol(k, e, x, a, h, gamma); },
        [=](int k, double e) { return disp(k).g(e) / h; }, [=](int k, double e) { return disp(k).dg(e); });
}

// ---------------------------------------------------------------------------
// Low frequency.

enum class AngularMethod { closed_form, quadrature };
enum class LowFreqSplit { none, chi0_part, complement };

struct LowFreqOptions {
    int J = 2;  // dyadic rings j = 0..J, i.e. rho >= (3/4) 2^{-J}
    LowFreqSplit split = LowFreqSplit::none;
    double M = 64;  // scale of the chi0(t lambda_k / M) split
    AngularMethod angular = AngularMethod::closed_form;
    double tol = 1e-10;  // relative to the L1 size of the symbol
    int kmax = 0;        // 0: every mode inside the phi(sqrt(lambda_k)) support
};

// int_{S^{d-2}} e^{-i r Theta_1} dTheta.
inline double angular_kernel(int d, double r, AngularMethod method = AngularMethod::closed_form) {
    if (d < 2) throw ArgumentError("angular_kernel: d must be >= 2");
    if (d == 2) return 2 * std::cos(r);
    if (d == 3 && method == AngularMethod::closed_form) return 2 * std::numbers::pi * std::cyl_bessel_j(0.0, r);
    const double n = d - 2.0;  // |S^{d-3}| = 2 pi^{n/2} / Gamma(n/2)
    const double sphere = 2 * std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2);
    const auto r_int = integrate_adaptive(
        [&](double p) { return std::cos(r * std::cos(p)) * std::pow(std::sin(p), d - 3); }, 0.0,
        std::numbers::pi, 1e-14, 48, 8 + static_cast<int>(std::abs(r)));
    return sphere * r_int.value;
}

// phi(rho) - phi(2^{J+1} rho) = sum_{j <= J} psi2(2^j rho).
inline double dyadic_weight(double rho, int J) { return cutoffs::phi(rho) - cutoffs::phi(std::ldexp(rho, J + 1)); }

inline double low_freq_lambda(int k, double rho) {
    return rho * rho + airy_table().omega(k) * std::cbrt(rho * rho * rho * rho);
}

// Real radial symbol of mode k without kernel and oscillating factor.
inline double low_freq_symbol(int k, double rho, double x, double a, double t, int d, const LowFreqOptions& opt) {
    const double lam = low_freq_lambda(k, rho);
    double cut = dyadic_weight(rho, opt.J) * cutoffs::phi(std::sqrt(lam));
    if (cut == 0) return 0;
    if (opt.split != LowFreqSplit::none) {
        const double c = cutoffs::chi0(t * lam / opt.M);
        cut *= opt.split == LowFreqSplit::chi0_part ? c : 1 - c;
    }
    const double r23 = std::cbrt(rho * rho), w = airy_table().omega(k);
    return cut * std::pow(rho, d - 2) * r23 / airy_table().lprime_at_zero(k) * ai(x * r23 - w) * ai(a * r23 - w);
}

inline double low_freq_rho_min(int J) { return 0.75 * std::ldexp(1.0, -J); }

// Modes with phi(sqrt(lambda_k(rho))) != 0 somewhere on rho >= rho_min.
inline ModeWindow low_freq_modes(int J, int kmax = 0) {
    const double r = low_freq_rho_min(J);
    const double wmax = (4 - r * r) / std::cbrt(r * r * r * r);
    const auto& table = airy_table();
    if (wmax >= table.zeros().back()) throw RangeError("low_freq_modes: J too large for the Airy table");
    int last = table.count_below(wmax);
    if (kmax > 0) last = std::min(last, kmax);
    return {1, last};
}

inline FieldValue green_low_freq(int m, double t, double x, double a, double y_norm, int d,
                                 const LowFreqOptions& opt = {}) {
    detail::check_mass(m);
    if (d < 2) throw ArgumentError("green_low_freq: d must be >= 2");
    if (!(a > 0)) throw ArgumentError("green_low_freq: a must be positive");
    if (!(x >= 0)) throw DomainError("green_low_freq: x must be >= 0");
    if (opt.J < 0) throw ArgumentError("green_low_freq: J must be >= 0");
    const double r = std::abs(y_norm);
    const ModeWindow win = low_freq_modes(opt.J, opt.kmax);
    const double lo = low_freq_rho_min(opt.J);
    const double mm = m * m;
    FieldValue out;
    out.mode_count = win.size();
    double scale = 0;
    std::vector<double> top(static_cast<std::size_t>(win.size()));
    for (int k = win.first; k <= win.last; ++k) {
        // lambda_k(rho) < 4 on the support.
        const double w = airy_table().omega(k);
        double rlo = 0, rhi = 2;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (rlo + rhi);
            (mid * mid + w * std::cbrt(mid * mid * mid * mid) < 4 ? rlo : rhi) = mid;
        }
        top[static_cast<std::size_t>(k - 1)] = std::min(2.0, rhi);
        if (top[static_cast<std::size_t>(k - 1)] > lo)
            scale += gauss_composite([&](double p) { return std::abs(low_freq_symbol(k, p, x, a, t, d, opt)); }, lo,
                                     top[static_cast<std::size_t>(k - 1)], 16);
    }
    if (scale == 0) return out;
    const double abs_tol = opt.tol * scale * angular_kernel(d, 0.0);
    for (int k = win.first; k <= win.last; ++k) {
        const double hi = top[static_cast<std::size_t>(k - 1)];
        if (hi <= lo) continue;
        const double w = airy_table().omega(k);
        auto g = [=](double p) { return std::sqrt(mm + low_freq_lambda(k, p)); };
        auto dg = [=](double p) { return (p + 2.0 / 3.0 * w * std::cbrt(p)) / g(p); };
        auto d2g = [=](double p) {
            const double gv = g(p), dv = dg(p);
            return (1 + 2.0 / 9.0 * w / std::cbrt(p * p) - dv * dv) / gv;
        };
        if (d == 2) {
            for (double s : {1.0, -1.0}) {
                PhaseSpec spec;
                spec.phase = [=](double p) { return t * g(p) + s * r * p; };
                spec.dphase = [=](double p) { return t * dg(p) + s * r; };
                spec.d2phase = [=](double p) { return t * d2g(p); };
                spec.amplitude = [&, k](double p) { return std::complex<double>(low_freq_symbol(k, p, x, a, t, d, opt)); };
                spec.lo = lo;
                spec.hi = hi;
                const auto res = integrate_oscillatory_result(spec, abs_tol / (2 * win.size()));
                if (!res.converged)
                    throw AccuracyError("green_low_freq: rho quadrature did not converge", std::abs(res.value),
                                        res.error);
                out.value += res.value;
                out.error_estimate += res.error;
            }
        } else {
            // The kernel oscillates at rate r; fold it into the panel count.
            PhaseSpec spec;
            spec.phase = [=](double p) { return t * g(p); };
            spec.dphase = [=](double p) { return std::abs(t * dg(p)) + r; };
            spec.d2phase = [=](double p) { return t * d2g(p); };
            spec.lo = lo;
            spec.hi = hi;
            std::vector<double> cuts{lo};
            detail::phase_panels(spec, lo, hi, cuts);
            auto f = [&, k](double p) {
                return angular_kernel(d, r * p, opt.angular) * low_freq_symbol(k, p, x, a, t, d, opt) *
                       std::polar(1.0, t * g(p));
            };
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const auto res = integrate_adaptive(f, cuts[i], cuts[i + 1],
                                                    abs_tol / win.size() * (cuts[i + 1] - cuts[i]) / (hi - lo), 30);
                if (!res.converged)
                    throw AccuracyError("green_low_freq: rho quadrature did not converge", std::abs(res.value),
                                        res.error);
                out.value += res.value;
                out.error_estimate += res.error;
            }
        }
    }
    return out;
}

// Largest group velocity d/drho sqrt(m^2 + lambda_k) over the modes and rings
// that carry weight.
inline double low_freq_max_speed(int m, const LowFreqOptions& opt = {}) {
    detail::check_mass(m);
    const ModeWindow win = low_freq_modes(opt.J, opt.kmax);
    const double lo = low_freq_rho_min(opt.J);
    double v = 0;
    for (int k = win.first; k <= win.last; ++k) {
        const double w = airy_table().omega(k);
        for (int i = 0; i <= 256; ++i) {
            const double p = lo + (2 - lo) * i / 256, lam = low_freq_lambda(k, p);
            if (lam >= 4) break;
            v = std::max(v, (p + 2.0 / 3.0 * w * std::cbrt(p)) / std::sqrt(m * m + lam));
        }
    }
    return v;
}

// Batched d = 2 low-frequency sum for fixed (m, a, J), no chi0 split.
inline SpectralProfile low_freq_profile(int m, double a, double t_max, double y_max, const LowFreqOptions& opt = {}) {
    detail::check_mass(m);
    if (opt.split != LowFreqSplit::none) throw ArgumentError("low_freq_profile: the chi0 split depends on t");
    const ModeWindow win = low_freq_modes(opt.J, opt.kmax);
    const double mm = m * m;
    auto g = [=](int k, double p) { return std::sqrt(mm + low_freq_lambda(k, p)); };
    return SpectralProfile(
        win, low_freq_rho_min(opt.J), 2.0, 1.0, t_max, y_max,
        [=](int k, double p, double x) { return low_freq_symbol(k, p, x, a, 0.0, 2, opt); },
        g,
        [=](int k, double p) { return (p + 2.0 / 3.0 * airy_table().omega(k) * std::cbrt(p)) / g(k, p); });
}

// ---------------------------------------------------------------------------
// Model integral v(z, t) = int e^{i t (z eta - sqrt(eta^2 + c eta^{4/3} + m^2))} psi1(eta) d eta.

struct ModelDispersion {
    double c, mm;
    double g(double e) const { return std::sqrt(e * e + c * std::pow(e, 4.0 / 3.0) + mm); }
    double dg(double e) const { return (e + 2.0 / 3.0 * c * std::cbrt(e)) / g(e); }
    // Numerator of g'' times g^3.
    double curvature(double e) const {
        return mm * (1 + 2.0 / 9.0 * c / std::cbrt(e * e)) - c * std::pow(e, 4.0 / 3.0) / 9 -
               2.0 / 9.0 * c * c * std::cbrt(e * e);
    }
    double d2g(double e) const {
        const double gv = g(e);
        return curvature(e) / (gv * gv * gv);
    }
};

inline PhaseSpec model_phase(int m, double c, double z, double t) {
    detail::check_mass(m);
    if (!(c >= 0)) throw ArgumentError("model integral: c must be >= 0");
    const ModelDispersion disp{c, double(m * m)};
    PhaseSpec spec;
    spec.phase = [=](double e) { return z * e - disp.g(e); };
    spec.dphase = [=](double e) { return z - disp.dg(e); };
    spec.d2phase = [=](double e) { return -disp.d2g(e); };
    spec.amplitude = [](double e) { return std::complex<double>(cutoffs::psi1(e)); };
    spec.lo = cutoffs::psi1.support_lo;
    spec.hi = cutoffs::psi1.support_hi;
    spec.lambda = t;
    return spec;
}

inline std::complex<double> model_integral(int m, double c, double z, double t, double tol = 1e-12) {
    if (!(t > 0)) throw ArgumentError("model_integral: t must be positive");
    return integrate_oscillatory(model_phase(m, c, z, t), tol);
}

struct DegeneratePoint {
    double eta0;
    double z0;
};

// Zero of the second eta-derivative of sqrt(eta^2 + c eta^{4/3} + m^2) on the
// psi1 support, and the z making the model phase stationary there.
inline std::optional<DegeneratePoint> find_degenerate(int m, double c) {
    detail::check_mass(m);
    if (!(c >= 0)) throw ArgumentError("find_degenerate: c must be >= 0");
    const ModelDispersion disp{c, double(m * m)};
    const double lo = cutoffs::psi1.support_lo, hi = cutoffs::psi1.support_hi;
    const int n = 400;
    // m = c = 0 makes the phase linear; an identically zero second derivative
    // is not a degenerate point.
    if (c == 0 && m == 0) return std::nullopt;
    double prev = disp.curvature(lo);
    for (int i = 1; i <= n; ++i) {
        const double e = lo + (hi - lo) * i / n;
        const double cur = disp.curvature(e);
        if (cur == 0 || (cur > 0) != (prev > 0)) {
            const double root = cur == 0 ? e
                                         : detail::bisect_root([&](double s) { return disp.curvature(s); },
                                                               lo + (hi - lo) * (i - 1) / n, e);
            return DegeneratePoint{root, disp.dg(root)};
        }
        prev = cur;
    }
    return std::nullopt;
}

// f_{k,j}(z) with z = rho~^{2/3}: the bracket of the second rho~-derivative of
// the low-frequency Klein-Gordon phase in dyadic ring j, mode k.
inline double kg_f(int k, int j, double z) {
    const double r = airy_table().omega(k) * std::exp2(-4.0 * j / 3.0);
    const double q = std::exp2(-2.0 * j);
    return 2.0 / 9.0 * (r / z) * (1 - r * z * z) - r * q * z * z / 9 + q;
}

struct KgDegenerate {
    int k;          // mode whose root lies closest to z = 1
    double z_star;  // root in z = rho~^{2/3}
    double rho_star;
    int candidates;  // number of modes with a sign change on the window
};

// Scan modes present in ring j (phi(sqrt(lambda_k)) != 0) for a sign change of
// f_{k,j} on the psi2 support, z in [(3/4)^{2/3}, 2^{2/3}].
inline std::optional<KgDegenerate> kg_degenerate_scan(int j) {
    if (j < 0) throw ArgumentError("kg_degenerate_scan: j must be >= 0");
    const double zlo = std::cbrt(0.75 * 0.75), zhi = std::cbrt(4.0);
    std::optional<KgDegenerate> best;
    int count = 0;
    const double q = std::exp2(-2.0 * j);
    for (int k = 1; k <= airy_table().count(); ++k) {
        const double r = airy_table().omega(k) * std::exp2(-4.0 * j / 3.0);
        if (q * std::pow(zlo, 3) + r * zlo * zlo >= 4) break;  // lambda_k >= 4 on the whole window
        const int n = 200;
        double prev = kg_f(k, j, zlo);
        for (int i = 1; i <= n; ++i) {
            const double z = zlo + (zhi - zlo) * i / n;
            const double cur = kg_f(k, j, z);
            if ((cur > 0) != (prev > 0)) {
                const double root =
                    detail::bisect_root([&](double s) { return kg_f(k, j, s); }, zlo + (zhi - zlo) * (i - 1) / n, z);
                ++count;
                if (!best || std::abs(root - 1) < std::abs(best->z_star - 1))
                    best = KgDegenerate{k, root, std::pow(root, 1.5), 0};
                break;
            }
            prev = cur;
        }
    }
    if (best) best->candidates = count;
    return best;
}

}  // namespace fd
