#pragma once

// Reflected-wave form of the high-frequency Green function. Poisson summation
// over the Airy zeros turns the mode sum into sum_N V_N with
//   V_N(t,x,y) = (1/h) int d eta psi1(|eta|) e^{i y eta/h}
//                int d alpha (|eta|/h)^{4/3} e^{i [t |eta| sqrt(1+alpha+m^2h^2/eta^2)/h - N L((|eta|/h)^{2/3} alpha)]}
//                psi1(|eta| sqrt(1+alpha)) psi2(alpha/gamma)
//                Ai((|eta|/h)^{2/3}(x-alpha)) Ai((|eta|/h)^{2/3}(a-alpha)).
// The Airy factors stand for the (sigma, s) integrals of the four-dimensional
// form, which they equal exactly.
//
// Rescaled phase (x = gamma X, alpha = gamma A, t = sqrt(gamma) T,
// y + t sqrt(1+gamma) = gamma^{3/2} Y, lambda = gamma^{3/2}/h):
//   Psi = eta (Y + U^3/3 + U(X-A) + S^3/3 + S(a/gamma-A)
//              + T (sqrt(1+gamma A+m^2h^2/eta^2) - sqrt(1+gamma))/gamma - (4/3) N A^{3/2})
//         + (N/lambda) B(eta lambda A^{3/2}).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "fd/cutoff.hpp"
#include "fd/green.hpp"
#include "fd/parallel.hpp"
#include "fd/quadrature.hpp"
#include "fd/spectral_phase.hpp"

namespace fd {

inline constexpr double kMinLambdaGamma = 5.0;

struct NWindow {
    int lo = 0;
    int hi = -1;
    bool empty() const { return hi < lo; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
};

// All N with |4 N sqrt(gamma) sqrt(1+gamma) - t| <= widen * Delta, where
// Delta = max(8 sqrt(gamma), |t|/2) plus four reflection periods. Without the
// guard periods the first omitted packet can reach 1e-2 of the sum at h = 2^-7.
inline NWindow n_window(double t, double gamma, double widen = 1.0) {
    if (!(gamma > 0)) throw ArgumentError("n_window: gamma must be positive");
    if (!(widen > 0)) throw ArgumentError("n_window: widen must be positive");
    const double period = 4 * std::sqrt(gamma) * std::sqrt(1 + gamma);
    const double delta = widen * (std::max(8 * std::sqrt(gamma), std::abs(t) / 2) + 4 * period);
    return {static_cast<int>(std::ceil((t - delta) / period)), static_cast<int>(std::floor((t + delta) / period))};
}

inline double lambda_gamma(double gamma, double h) { return std::pow(gamma, 1.5) / h; }

struct PacketResolution {
    int eta_nodes = 0;     // 0: from the bandwidth
    int alpha_panels = 0;  // 0: from the phase rate
};

// V_N for every N of a window at fixed (m, h, a, gamma, t, x), for any |y| <= y_max.
// The N-independent factors are computed once on the (eta, alpha) grid.
class ReflectedWaves {
public:
    ReflectedWaves(const GreenQuery& q, NWindow window, double y_max, PacketResolution res = {})
        : q_(q), window_(window) {
        detail::check_high_freq(q);
        if (window.empty()) throw ArgumentError("ReflectedWaves: empty N window");
        if (lambda_gamma(q.gamma, q.h) < kMinLambdaGamma)
            throw RegimeError("reflected waves need gamma^{3/2}/h >= 5; use green_high_freq");
        const double h = q.h, gamma = q.gamma;
        const double alo = 0.75 * gamma, ahi = 2 * gamma;
        const double c_max = std::cbrt(std::pow(1.5 / h, 2));
        const double w_max = c_max * ahi;
        const double lp_max = std::max(2 * std::sqrt(w_max), 3.2);
        const double n_abs = std::max(std::abs(window.lo), std::abs(window.hi));
        // Phase rates in alpha and eta, bounding every factor of the integrand.
        const double rate_alpha =
            c_max * (n_abs * lp_max + 2 * std::sqrt(w_max)) + std::abs(q.t) * 1.5 / (2 * h);
        const double rate_eta = (std::abs(q.t) * std::sqrt(1 + ahi) * 1.01 + std::abs(y_max)) / h +
                                n_abs * lp_max * w_max * (2.0 / 3.0) / 0.5 + 2 * std::pow(ahi, 1.5) / h;
        int panels = res.alpha_panels > 0 ? res.alpha_panels
                                          : static_cast<int>(std::ceil(rate_alpha * (ahi - alo) / 4)) + 4;
        int n = res.eta_nodes > 0 ? res.eta_nodes
                                  : static_cast<int>(std::ceil((2 * rate_eta + 2000) / (2 * std::numbers::pi)));
        n = std::max(n, 256);
        n += n % 2;
        eta_nodes_ = n;
        alpha_panels_ = panels;
        step_ = 1.0 / n;
        const auto nw = static_cast<std::size_t>(window.size());
        inner_.assign(nw * (n + 1), {});
        const auto& gl = gl15();
        const double pw = (ahi - alo) / panels;
        const double mh2 = q.m * q.m * h * h;
        parallel_for(static_cast<std::size_t>(n - 1), [&](std::size_t idx) {
            const int l = static_cast<int>(idx) + 1;
            const double eta = 0.5 + l * step_;
            if (cutoffs::psi1(eta) == 0) return;
            const double theta = eta / h;
            const double c = std::cbrt(theta * theta);
            const double pre = c * c / h;  // (eta/h)^{4/3} / h
            std::vector<std::complex<double>> acc(nw);
            for (int p = 0; p < panels; ++p) {
                const double mid = alo + (p + 0.5) * pw;
                for (std::size_t i = 0; i < gl.x.size(); ++i) {
                    const double alpha = mid + 0.5 * pw * gl.x[i];
                    const double cut = cutoffs::psi2(alpha / gamma) * cutoffs::psi1(eta * std::sqrt(1 + alpha));
                    if (cut == 0) continue;
                    const double amp = 0.5 * pw * gl.w[i] * pre * cut * ai(c * (q.x - alpha)) * ai(c * (q.a - alpha));
                    const double tph = q.t * theta * std::sqrt(1 + alpha + mh2 / (eta * eta));
                    const double lw = big_l(c * alpha);
                    std::complex<double> z = std::polar(amp, tph - window.lo * lw);
                    const std::complex<double> rot = std::polar(1.0, -lw);
                    for (std::size_t k = 0; k < nw; ++k) {
                        acc[k] += z;
                        z *= rot;
                    }
                }
            }
            for (std::size_t k = 0; k < nw; ++k) inner_[k * (n + 1) + static_cast<std::size_t>(l)] = acc[k];
        });
    }

    const NWindow& window() const { return window_; }
    int eta_nodes() const { return eta_nodes_; }
    int alpha_panels() const { return alpha_panels_; }

    // V_N at y (both signs of eta), with the half-grid error estimate.
    SpectralProfile::Sample packet(int N, double y) const {
        if (N < window_.lo || N > window_.hi) throw ArgumentError("ReflectedWaves: N outside the window");
        return transform(static_cast<std::size_t>(N - window_.lo), y);
    }

    SpectralProfile::Sample sum(double y) const {
        SpectralProfile::Sample out{{}, 0};
        for (int N = window_.lo; N <= window_.hi; ++N) {
            const auto s = packet(N, y);
            out.value += s.value;
            out.error += s.error;
        }
        return out;
    }

private:
    SpectralProfile::Sample transform(std::size_t k, double y) const {
        const double h = q_.h;
        std::complex<double> full{}, half{};
        for (int l = 1; l < eta_nodes_; ++l) {
            const double eta = 0.5 + l * step_;
            const std::complex<double> v = inner_[k * (eta_nodes_ + 1) + static_cast<std::size_t>(l)];
            const std::complex<double> term = cutoffs::psi1(eta) * 2 * std::cos(y * eta / h) * v;
            full += term;
            if (l % 2 == 0) half += term;
        }
        full *= step_;
        half *= 2 * step_;
        return {full, std::abs(full - half)};
    }

    GreenQuery q_;
    NWindow window_;
    int eta_nodes_ = 0;
    int alpha_panels_ = 0;
    double step_ = 0;
    std::vector<std::complex<double>> inner_;
};

inline std::complex<double> wave_packet(int N, const GreenQuery& q, PacketResolution res = {}) {
    const ReflectedWaves w(q, {N, N}, std::abs(q.y), res);
    return w.packet(N, q.y).value;
}

struct ReflectedSum {
    std::complex<double> value;
    double error_estimate;
    NWindow window;
    double outside;  // largest |V_N| just outside the window
    double scale;    // sum of |V_N| over the window
};

inline constexpr double kWindowTol = 1e-4;

// sum_N V_N over the window (default n_window). The two neighbours of the
// window are evaluated too; if either exceeds 10 window_tol sum_N |V_N| the
// window is declared too small.
inline ReflectedSum sum_reflected(const GreenQuery& q, std::optional<NWindow> window = std::nullopt,
                                  double window_tol = kWindowTol, PacketResolution res = {}) {
    const NWindow w = window.value_or(n_window(q.t, q.gamma));
    if (w.empty()) throw ArgumentError("sum_reflected: empty N window");
    const ReflectedWaves waves(q, {w.lo - 1, w.hi + 1}, std::abs(q.y), res);
    ReflectedSum out{{}, 0, w, 0, 0};
    for (int N = w.lo; N <= w.hi; ++N) {
        const auto s = waves.packet(N, q.y);
        out.value += s.value;
        out.error_estimate += s.error;
        out.scale += std::abs(s.value);
    }
    out.outside = std::max(std::abs(waves.packet(w.lo - 1, q.y).value), std::abs(waves.packet(w.hi + 1, q.y).value));
    if (out.outside > 10 * window_tol * out.scale && out.outside > 10 * out.error_estimate)
        throw WindowError("sum_reflected: N window too small", std::abs(out.value), out.outside);
    return out;
}

// ---------------------------------------------------------------------------
// Phase functions.

// Phi_N of the four-dimensional form, in the original variables.
inline double phi_n(int N, int m, double h, double a, double t, double x, double y, double sigma, double s,
                    double alpha, double eta) {
    const double e = std::abs(eta);
    if (!(e > 0)) throw DomainError("phi_n: eta must be non-zero");
    const double w = std::cbrt(e * e / (h * h)) * alpha;
    return y * eta + e * (sigma * sigma * sigma / 3 + sigma * (x - alpha) + s * s * s / 3 + s * (a - alpha) -
                          N * h / e * big_l(w) + t * std::sqrt(1 + alpha + m * m * h * h / (e * e)));
}

struct PhasePoint {
    int N = 0;
    double T = 0, X = 0, Y = 0;
    double Upsilon = 0, S = 0, A = 1, eta = 1;
    double lambda_gamma = 10;
};

struct PsiContext {
    int m = 0;
    double a_over_gamma = 1;
    double gamma = 0.25;
    double h = 1.0 / 128;
};

struct PsiValue {
    double value;
    std::array<double, 4> grad;  // d/dUpsilon, d/dS, d/dA, d/deta
};

inline PsiValue phase_psi(const PhasePoint& p, const PsiContext& c) {
    if (!(p.A > 0)) throw DomainError("phase_psi: A must be positive");
    if (!(p.eta > 0)) throw DomainError("phase_psi: eta must be positive");
    const double lam = p.lambda_gamma, g = c.gamma;
    const double mh = c.m * c.m * c.h * c.h / (p.eta * p.eta);
    const double r = std::sqrt(1 + g * p.A + mh), r0 = std::sqrt(1 + g);
    const double sa = std::sqrt(p.A), a32 = p.A * sa;
    const auto b = b_remainder(p.eta * lam * a32);
    const double U = p.Upsilon, S = p.S;
    const double bracket = p.Y + U * U * U / 3 + U * (p.X - p.A) + S * S * S / 3 + S * (c.a_over_gamma - p.A) +
                           p.T * (r - r0) / g - 4.0 / 3.0 * p.N * a32;
    PsiValue out;
    out.value = p.eta * bracket + p.N / lam * b.b;
    out.grad[0] = p.eta * (U * U + p.X - p.A);
    out.grad[1] = p.eta * (S * S + c.a_over_gamma - p.A);
    out.grad[2] = p.eta * (p.T / (2 * r) - U - S - 2 * p.N * sa * (1 - 0.75 * b.bp));
    out.grad[3] = bracket - p.T * mh / (g * r) + p.N * a32 * b.bp;
    return out;
}

// The equation obtained by eliminating N and B' between the A- and
// eta-stationarity conditions; zero on every critical point.
inline double crit_yt_residual(const PhasePoint& p, const PsiContext& c) {
    const double g = c.gamma;
    const double mh = c.m * c.m * c.h * c.h / (p.eta * p.eta);
    const double r = std::sqrt(1 + g * p.A + mh), r0 = std::sqrt(1 + g);
    const double U = p.Upsilon, S = p.S;
    // (r - r0) / gamma = ((A - 1) + mh / gamma) / (r + r0).
    const double lhs = p.Y + p.T * (((p.A - 1) + mh / g) / (r + r0) - mh / (g * r)) + U * U * U / 3 +
                       U * (p.X - p.A) + S * S * S / 3 + S * (c.a_over_gamma - p.A);
    return lhs - 2.0 / 3.0 * p.A * (p.T / (2 * r) - (U + S));
}

// ---------------------------------------------------------------------------
// Critical points of Psi in (Upsilon, S, A, eta).

struct CriticalPoint {
    double Upsilon, S, A, eta;
    double residual;
};

struct CriticalBox {
    double a_lo = 0.9, a_hi = 8;
    double us_max = 3;
    double eta_lo = 0.5, eta_hi = 1.5;
};

struct CriticalOptions {
    std::array<int, 4> seeds{6, 6, 6, 4};
    double dedup = 1e-6;
    int max_iter = 60;
    double tol = 1e-12;
    CriticalBox box{};
};

struct CriticalSolve {
    std::vector<CriticalPoint> solutions;
    int skipped_seeds = 0;  // singular Jacobian at the seed
};

namespace detail {

inline Eigen::Vector4d critical_residual(const PhasePoint& p, const PsiContext& c) {
    const auto v = phase_psi(p, c);
    Eigen::Vector4d f;
    f << v.grad[0] / p.eta, v.grad[1] / p.eta, v.grad[2] / p.eta, v.grad[3];
    return f;
}

inline bool in_box(const PhasePoint& p, const CriticalBox& b) {
    return p.A >= b.a_lo && p.A <= b.a_hi && std::abs(p.Upsilon) <= b.us_max && std::abs(p.S) <= b.us_max &&
           p.eta >= b.eta_lo && p.eta <= b.eta_hi;
}

// Damped Newton with a least-squares step; unknowns are selected by `free`
// (Upsilon, S, A, eta, T, X, Y). Returns the final residual norm.
inline double newton_polish(PhasePoint& p, const PsiContext& c, const std::array<bool, 7>& free, int max_iter,
                            double tol, bool* singular = nullptr) {
    auto get = [&](int i) -> double& {
        switch (i) {
            case 0: return p.Upsilon;
            case 1: return p.S;
            case 2: return p.A;
            case 3: return p.eta;
            case 4: return p.T;
            case 5: return p.X;
            default: return p.Y;
        }
    };
    std::vector<int> vars;
    for (int i = 0; i < 7; ++i)
        if (free[static_cast<std::size_t>(i)]) vars.push_back(i);
    const auto nv = static_cast<Eigen::Index>(vars.size());
    Eigen::Vector4d f = critical_residual(p, c);
    double norm = f.norm();
    for (int it = 0; it < max_iter && norm > tol; ++it) {
        Eigen::MatrixXd J(4, nv);
        for (Eigen::Index j = 0; j < nv; ++j) {
            double& v = get(vars[static_cast<std::size_t>(j)]);
            const double save = v, e = 1e-7 * std::max(1.0, std::abs(save));
            v = save + e;
            const Eigen::Vector4d fp = critical_residual(p, c);
            v = save - e;
            const Eigen::Vector4d fm = critical_residual(p, c);
            v = save;
            J.col(j) = (fp - fm) / (2 * e);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-10);
        if (it == 0 && singular && cod.rank() < std::min<Eigen::Index>(4, nv)) *singular = true;
        const Eigen::VectorXd step = cod.solve(-f);
        double scale = 1;
        bool moved = false;
        std::vector<double> save(vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) save[j] = get(vars[j]);
        for (int ls = 0; ls < 30; ++ls, scale *= 0.5) {
            for (std::size_t j = 0; j < vars.size(); ++j)
                get(vars[j]) = save[j] + scale * step(static_cast<Eigen::Index>(j));
            if (!(p.A > 1e-3) || !(p.eta > 1e-3)) continue;
            const Eigen::Vector4d fn = critical_residual(p, c);
            if (fn.norm() < norm) {
                f = fn;
                norm = fn.norm();
                moved = true;
                break;
            }
        }
        if (!moved) {
            for (std::size_t j = 0; j < vars.size(); ++j) get(vars[j]) = save[j];
            break;
        }
    }
    return norm;
}

}  // namespace detail

inline CriticalSolve critical_solve(int N, double T, double X, double Y, double gamma, double h, double a, int m,
                                    const CriticalOptions& opt = {}) {
    detail::check_mass(m);
    if (!(gamma > 0) || !(h > 0) || !(a > 0)) throw ArgumentError("critical_solve: gamma, h, a must be positive");
    const PsiContext ctx{m, a / gamma, gamma, h};
    const auto& b = opt.box;
    CriticalSolve out;
    auto node = [](double lo, double hi, int i, int n) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1.0); };
    for (int i0 = 0; i0 < opt.seeds[0]; ++i0)
        for (int i1 = 0; i1 < opt.seeds[1]; ++i1)
            for (int i2 = 0; i2 < opt.seeds[2]; ++i2)
                for (int i3 = 0; i3 < opt.seeds[3]; ++i3) {
                    PhasePoint p;
                    p.N = N;
                    p.T = T;
                    p.X = X;
                    p.Y = Y;
                    p.lambda_gamma = lambda_gamma(gamma, h);
                    p.Upsilon = node(-b.us_max, b.us_max, i0, opt.seeds[0]);
                    p.S = node(-b.us_max, b.us_max, i1, opt.seeds[1]);
                    p.A = node(b.a_lo, b.a_hi, i2, opt.seeds[2]);
                    p.eta = node(b.eta_lo, b.eta_hi, i3, opt.seeds[3]);
                    bool singular = false;
                    const double res =
                        detail::newton_polish(p, ctx, {true, true, true, true, false, false, false}, opt.max_iter, opt.tol, &singular);
                    if (singular && res > opt.tol) {
                        ++out.skipped_seeds;
                        continue;
                    }
                    if (res > 1e3 * opt.tol || !detail::in_box(p, b)) continue;
                    const bool dup = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const CriticalPoint& s) {
                        return std::hypot(std::hypot(s.Upsilon - p.Upsilon, s.S - p.S), std::hypot(s.A - p.A, s.eta - p.eta)) <
                               opt.dedup;
                    });
                    if (!dup) out.solutions.push_back({p.Upsilon, p.S, p.A, p.eta, res});
                }
    return out;
}

// ---------------------------------------------------------------------------
// Overlapping reflections.

struct OverlapReport {
    double t, x, y;
    double gamma, h;
    int m;
    std::vector<int> members;
    double bound_rhs;
};

struct OverlapOptions {
    int probes = 5;       // per axis of the (T, X, Y) neighbourhood box
    int eta_samples = 9;  // eta grid for the reduction
    int a_samples = 400;  // A grid for the 1-D root search
    CriticalBox box{};
};

// O(1) + t / (gamma^{1/2} gamma^3 / h^2) + m^2 |t| h^2 / gamma^{3/2}, with O(1) = 1.
inline double overlap_bound(double t, double gamma, double h, int m) {
    return 1 + std::abs(t) / (std::sqrt(gamma) * std::pow(gamma, 3) / (h * h)) +
           m * m * std::abs(t) * h * h / std::pow(gamma, 1.5);
}

namespace detail {

struct OverlapSample {
    double nstar;
    PhasePoint point;
};

// Every critical point of the system at fixed (T, X, Y, eta) lies on a root A
// of the N-free relation for some branch Upsilon = +-sqrt(A - X),
// S = +-sqrt(A - a/gamma); the A-condition then gives N as a real number.
inline void overlap_reduce(double T, double X, double Y, double eta, const PsiContext& c, double lam,
                           const OverlapOptions& opt, std::vector<OverlapSample>& out) {
    const double a_lo = std::max({opt.box.a_lo, X, c.a_over_gamma});
    const double a_hi = std::min({opt.box.a_hi, X + opt.box.us_max * opt.box.us_max,
                                  c.a_over_gamma + opt.box.us_max * opt.box.us_max});
    if (!(a_hi > a_lo)) return;
    for (int su : {-1, 1})
        for (int ss : {-1, 1}) {
            auto point = [&](double A) {
                PhasePoint p;
                p.T = T;
                p.X = X;
                p.Y = Y;
                p.A = A;
                p.eta = eta;
                p.lambda_gamma = lam;
                p.Upsilon = su * std::sqrt(std::max(0.0, A - X));
                p.S = ss * std::sqrt(std::max(0.0, A - c.a_over_gamma));
                return p;
            };
            auto f = [&](double A) { return crit_yt_residual(point(A), c); };
            const int n = opt.a_samples;
            double prev = f(a_lo);
            for (int i = 1; i <= n; ++i) {
                const double A1 = a_lo + (a_hi - a_lo) * i / n;
                const double cur = f(A1);
                if ((cur > 0) != (prev > 0) || cur == 0) {
                    const double root = cur == 0 ? A1 : bisect_root(f, a_lo + (a_hi - a_lo) * (i - 1) / n, A1);
                    PhasePoint p = point(root);
                    const double mh = c.m * c.m * c.h * c.h / (eta * eta);
                    const double r = std::sqrt(1 + c.gamma * root + mh);
                    const double bp = b_remainder(eta * lam * root * std::sqrt(root)).bp;
                    const double nstar = (T / (2 * r) - (p.Upsilon + p.S)) / (2 * std::sqrt(root) * (1 - 0.75 * bp));
                    out.push_back({nstar, p});
                }
                prev = cur;
            }
        }
}

}  // namespace detail

// N with a critical point for some (t', x', y') in the neighbourhood
// |t'-t| <= sqrt(gamma), |x'-x| < gamma, |y'+t' sqrt(1+gamma) - y - t sqrt(1+gamma)| < gamma^{3/2}.
// Candidates are the integers inside the range of real N over the probe grid;
// each is confirmed by Newton on the full system with (T', X', Y') free.
inline OverlapReport overlap_count(double t, double x, double y, double gamma, double h, int m,
                                   std::optional<double> a_opt = std::nullopt, const OverlapOptions& opt = {}) {
    detail::check_mass(m);
    if (!(gamma > 0) || !(h > 0)) throw ArgumentError("overlap_count: gamma and h must be positive");
    if (!(x >= 0)) throw DomainError("overlap_count: x must be >= 0");
    const double a = a_opt.value_or(gamma);
    const PsiContext ctx{m, a / gamma, gamma, h};
    const double lam = lambda_gamma(gamma, h);
    const double T = t / std::sqrt(gamma), X = x / gamma;
    const double Y = (y + t * std::sqrt(1 + gamma)) / std::pow(gamma, 1.5);
    OverlapReport rep{t, x, y, gamma, h, m, {}, overlap_bound(t, gamma, h, m)};
    std::vector<detail::OverlapSample> samples;
    const int np = opt.probes;
    auto at = [np](double c, int i) { return np == 1 ? c : c - 1 + 2.0 * i / (np - 1); };
    for (int it = 0; it < np; ++it)
        for (int ix = 0; ix < np; ++ix)
            for (int iy = 0; iy < np; ++iy) {
                const double Xp = at(X, ix);
                if (Xp < 0) continue;
                for (int ie = 0; ie < opt.eta_samples; ++ie) {
                    const double eta =
                        opt.box.eta_lo + (opt.box.eta_hi - opt.box.eta_lo) * ie / std::max(1, opt.eta_samples - 1);
                    detail::overlap_reduce(at(T, it), Xp, at(Y, iy), eta, ctx, lam, opt, samples);
                }
            }
    if (samples.empty()) return rep;
    double lo = samples.front().nstar, hi = lo;
    for (const auto& s : samples) {
        lo = std::min(lo, s.nstar);
        hi = std::max(hi, s.nstar);
    }
    for (int N = static_cast<int>(std::ceil(lo - 1e-9)); N <= static_cast<int>(std::floor(hi + 1e-9)); ++N) {
        std::vector<const detail::OverlapSample*> order;
        for (const auto& s : samples) order.push_back(&s);
        std::sort(order.begin(), order.end(), [N](auto* u, auto* v) {
            return std::abs(u->nstar - N) < std::abs(v->nstar - N);
        });
        // Samples repeat across eta when m = 0; try up to 32 distinct starts.
        bool ok = false;
        int tries = 0;
        double last = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < order.size() && tries < 32 && !ok; ++i) {
            if (std::abs(order[i]->nstar - last) < 1e-12) continue;
            last = order[i]->nstar;
            ++tries;
            PhasePoint p = order[i]->point;
            p.N = N;
            const double res = detail::newton_polish(p, ctx, {true, true, true, true, true, true, true}, 60, 1e-12);
            ok = res < 1e-9 && detail::in_box(p, opt.box) && std::abs(p.T - T) <= 1 + 1e-9 &&
                 std::abs(p.X - X) <= 1 + 1e-9 && std::abs(p.Y - Y) <= 1 + 1e-9 && p.X >= 0;
        }
        if (ok) rep.members.push_back(N);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Airy-Poisson identity: sum_N int e^{-i N L(w)} f(w) dw = 2 pi sum_k f(w_k) / L'(w_k).

struct PoissonCheck {
    double lhs;
    double lhs_imag;
    double rhs;
    int zeros_in_support;
};

// exp(1 - 1/(1-u^2)) with u = 2 (w - center) / width; peak value 1.
inline std::function<double(double)> bump(double center, double width) {
    if (!(width > 0)) throw ArgumentError("bump: width must be positive");
    return [=](double w) {
        const double u = 2 * (w - center) / width;
        return std::abs(u) < 1 ? std::exp(1 - 1 / (1 - u * u)) : 0.0;
    };
}

inline PoissonCheck airy_poisson_check(const std::function<double(double)>& f, double lo, double hi, int nmax,
                                       double tol = 1e-13) {
    if (nmax < 0) throw ArgumentError("airy_poisson_check: nmax must be >= 0");
    if (!(lo >= 0) || !(hi > lo)) throw ArgumentError("airy_poisson_check: support must lie in [0, inf)");
    if (hi >= airy_table().zeros().back()) throw RangeError("airy_poisson_check: support beyond the Airy table");
    std::complex<double> total{};
    for (int N = -nmax; N <= nmax; ++N) {
        PhaseSpec spec;
        spec.phase = [](double w) { return -big_l(w); };
        spec.dphase = [](double w) { return -big_l_deriv(w); };
        spec.d2phase = [](double w) { return -big_l_values(w).lpp; };
        spec.amplitude = [&](double w) { return std::complex<double>(f(w)); };
        spec.lo = lo;
        spec.hi = hi;
        spec.lambda = N;
        if (N == 0) {
            total += integrate_adaptive([&](double w) { return f(w); }, lo, hi, tol, 48, 16).value;
        } else {
            // lambda enters only through |lambda| phase'; a negative N flips the phase sign.
            spec.lambda = std::abs(N);
            if (N < 0) {
                spec.phase = [](double w) { return big_l(w); };
                spec.dphase = [](double w) { return big_l_deriv(w); };
                spec.d2phase = [](double w) { return big_l_values(w).lpp; };
            }
            total += integrate_oscillatory_result(spec, tol).value;
        }
    }
    PoissonCheck out{total.real(), total.imag(), 0, 0};
    const auto& table = airy_table();
    for (int k = 1; k <= table.count() && table.omega(k) < hi; ++k) {
        if (table.omega(k) <= lo) continue;
        out.rhs += 2 * std::numbers::pi * f(table.omega(k)) / table.lprime_at_zero(k);
        ++out.zeros_in_support;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transverse rescaling for the (h, h~) family.

struct TransverseScaling {
    double T, X, Y;
    double a_tilde;
    double lambda_tilde;
    bool negligible;  // a > 4 (h~/h)^2: the family contributes O(h^inf)
};

inline TransverseScaling transverse_rescale(double h, double h_tilde, double t, double x, double a, double y) {
    if (!(h > 0) || !(h_tilde >= h)) throw ArgumentError("transverse_rescale: need 0 < h <= h_tilde");
    const double r = h / h_tilde;
    if (a > 4 / (r * r)) return {0, 0, 0, 0, 0, true};
    return {t * r * r, x * r * r, r * r * r * (y + t), a * r * r, h_tilde * h_tilde / (h * h * h), false};
}

}  // namespace fd
