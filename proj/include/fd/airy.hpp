#pragma once

// Airy functions Ai, Bi and their derivatives on the real line, Ai on the
// rotated rays used by A_+ and A_-, and the zeros of Ai(-x).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fd/errors.hpp"

namespace fd {

struct AiryValues {
    double ai;
    double aip;
    double bi;
    double bip;
};

namespace detail {

inline constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
inline constexpr long double kMinusAip0 = 0.258819403792806798405183560189203963L;
inline constexpr long double kSqrt3 = 1.732050807568877293527446341505872367L;

// Below this modulus the Maclaurin series is summed in long double; beyond it
// the asymptotic expansions are used.
inline constexpr double kSeriesRadius = 8.0;

template <class T>
struct SeriesFG {
    T f, fp, g, gp;
};

// Ai = c1 f - c2 g, Bi = sqrt(3)(c1 f + c2 g).
template <class T>
SeriesFG<T> maclaurin_fg(T z) {
    using std::abs;
    const T z3 = z * z * z;
    T t = 1, u = z, p = z * z / T(2), q = 1;
    SeriesFG<T> s{t, p, u, q};
    for (int k = 1; k < 400; ++k) {
        const long double kk = k;
        t *= z3 / T((3 * kk - 1) * (3 * kk));
        u *= z3 / T((3 * kk) * (3 * kk + 1));
        q *= z3 / T((3 * kk - 2) * (3 * kk));
        s.f += t;
        s.g += u;
        s.gp += q;
        if (k >= 2) {
            p *= z3 / T((3 * kk - 3) * (3 * kk - 1));
            s.fp += p;
        }
        const long double term = abs(t) + abs(u) + abs(p) + abs(q);
        const long double size = abs(s.f) + abs(s.g) + abs(s.fp) + abs(s.gp);
        if (k > 3 && term <= 1e-21L * size) break;
    }
    return s;
}

// u_k of the Airy asymptotic expansions; v_k = -(6k+1)/(6k-1) u_k.
struct AsymptoticCoefficients {
    static constexpr int n = 48;
    std::array<double, n> u{};
    std::array<double, n> v{};
    AsymptoticCoefficients() {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 1; k < n; ++k) {
            const double kk = k;
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};

inline const AsymptoticCoefficients& asymptotic_coefficients() {
    static const AsymptoticCoefficients c;
    return c;
}

// Asymptotic sum sum_k sign^k c_k zeta^{-k}, stopped at the smallest term.
template <class T>
T asymptotic_sum(const std::array<double, AsymptoticCoefficients::n>& c, T inv_zeta, int sign) {
    using std::abs;
    T sum = 0, power = 1;
    double last = INFINITY;
    for (int k = 0; k < AsymptoticCoefficients::n; ++k) {
        const T term = (k % 2 == 1 && sign < 0 ? -1.0 : 1.0) * c[k] * power;
        const double mag = abs(term);
        if (mag > last) break;
        sum += term;
        if (mag < 1e-18 * abs(sum)) break;
        last = mag;
        power *= inv_zeta;
    }
    return sum;
}

// Oscillatory-side modulus/phase series of Ai(-r), Bi(-r):
// P, Q for the functions and R, S for the derivatives.
struct OscillatorySeries {
    double p, q, r, s;
    double p_minus_1;
};

inline OscillatorySeries oscillatory_series(double zeta) {
    const auto& c = asymptotic_coefficients();
    const double iz = 1.0 / zeta;
    OscillatorySeries o{0, 0, 0, 0, 0};
    double power = 1.0;
    double last = INFINITY;
    for (int k = 0; k < AsymptoticCoefficients::n; ++k) {
        const double mag = std::max(std::abs(c.u[k]), std::abs(c.v[k])) * power;
        if (mag > last) break;
        const int m = k / 2;
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            o.p += sgn * c.u[k] * power;
            o.r += sgn * c.v[k] * power;
            if (k > 0) o.p_minus_1 += sgn * c.u[k] * power;
        } else {
            o.q += sgn * c.u[k] * power;
            o.s += sgn * c.v[k] * power;
        }
        if (mag < 1e-18) break;
        last = mag;
        power *= iz;
    }
    return o;
}

// Exponentially scaled values on the positive axis: Ai = e^{-zeta} ai_s,
// Bi = e^{zeta} bi_s (and likewise for the derivatives).
struct ScaledPositive {
    double zeta, ai_s, aip_s, bi_s, bip_s;
};

inline ScaledPositive scaled_positive(double x) {
    const auto& c = asymptotic_coefficients();
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double iz = 1.0 / zeta;
    const double x4 = std::sqrt(std::sqrt(x));
    const double rpi = 1.0 / std::sqrt(std::numbers::pi);
    return {zeta,
            0.5 * rpi / x4 * asymptotic_sum(c.u, iz, -1),
            -0.5 * rpi * x4 * asymptotic_sum(c.v, iz, -1),
            rpi / x4 * asymptotic_sum(c.u, iz, +1),
            rpi * x4 * asymptotic_sum(c.v, iz, +1)};
}

inline AiryValues airy_series(double x) {
    const auto s = maclaurin_fg<long double>(x);
    const long double c1 = kAi0, c2 = kMinusAip0;
    return {static_cast<double>(c1 * s.f - c2 * s.g), static_cast<double>(c1 * s.fp - c2 * s.gp),
            static_cast<double>(kSqrt3 * (c1 * s.f + c2 * s.g)),
            static_cast<double>(kSqrt3 * (c1 * s.fp + c2 * s.gp))};
}

inline AiryValues airy_asymptotic(double x) {
    if (x > 0) {
        const auto s = scaled_positive(x);
        const double em = std::exp(-s.zeta), ep = std::exp(s.zeta);
        return {em * s.ai_s, em * s.aip_s, ep * s.bi_s, ep * s.bip_s};
    }
    const double r = -x;
    const double zeta = 2.0 / 3.0 * r * std::sqrt(r);
    const auto o = oscillatory_series(zeta);
    const double sz = std::sin(zeta), cz = std::cos(zeta);
    const double sc = (sz - cz) * std::numbers::sqrt2 / 2;  // sin(zeta - pi/4)
    const double cc = (cz + sz) * std::numbers::sqrt2 / 2;  // cos(zeta - pi/4)
    const double r4 = std::sqrt(std::sqrt(r));
    const double rpi = 1.0 / std::sqrt(std::numbers::pi);
    return {rpi / r4 * (cc * o.p + sc * o.q), rpi * r4 * (sc * o.r - cc * o.s),
            rpi / r4 * (-sc * o.p + cc * o.q), rpi * r4 * (cc * o.r + sc * o.s)};
}

inline void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite argument");
}

}  // namespace detail

// Ai, Ai', Bi, Bi' at real x.
inline AiryValues airy(double x) {
    detail::require_finite(x, "airy");
    if (std::abs(x) <= detail::kSeriesRadius) return detail::airy_series(x);
    return detail::airy_asymptotic(x);
}

inline double ai(double x) { return airy(x).ai; }
inline double ai_deriv(double x) { return airy(x).aip; }
inline double bi(double x) { return airy(x).bi; }
inline double bi_deriv(double x) { return airy(x).bip; }

// Ai(w) for complex w with |arg w| < pi; series near the origin, the
// exponential expansion beyond.
inline std::complex<double> ai_complex(std::complex<double> w) {
    using cld = std::complex<long double>;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw DomainError("ai_complex: non-finite argument");
    if (std::abs(w) <= detail::kSeriesRadius) {
        const auto s = detail::maclaurin_fg<cld>(cld(w.real(), w.imag()));
        const cld v = detail::kAi0 * s.f - detail::kMinusAip0 * s.g;
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    const auto zeta = 2.0 / 3.0 * w * std::sqrt(w);
    const auto sum = detail::asymptotic_sum(detail::asymptotic_coefficients().u, 1.0 / zeta, -1);
    return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(w, 0.25)) * sum;
}

inline constexpr double kAplusRange = 50.0;

// A_+(z) = e^{-i pi/3} Ai(e^{-i pi/3} z).
inline std::complex<double> a_plus(double z) {
    detail::require_finite(z, "a_plus");
    if (std::abs(z) > kAplusRange) throw RangeError("a_plus: |z| > 50");
    const std::complex<double> rot = std::polar(1.0, -std::numbers::pi / 3);
    const std::complex<double> w = z >= 0 ? rot * z : std::polar(-z, 2 * std::numbers::pi / 3);
    return rot * ai_complex(w);
}

// A_-(z) = e^{i pi/3} Ai(e^{i pi/3} z).
inline std::complex<double> a_minus(double z) {
    detail::require_finite(z, "a_minus");
    if (std::abs(z) > kAplusRange) throw RangeError("a_minus: |z| > 50");
    const std::complex<double> rot = std::polar(1.0, std::numbers::pi / 3);
    const std::complex<double> w = z >= 0 ? rot * z : std::polar(-z, -2 * std::numbers::pi / 3);
    return rot * ai_complex(w);
}

// k-th zero of Ai(-x): bracket around the leading asymptotic, bisect, then Newton.
inline double airy_zero(int k) {
    if (k <= 0) throw ArgumentError("airy_zero: k must be positive");
    const double t = 3 * std::numbers::pi * (4.0 * k - 1) / 8;
    const double seed = std::pow(t, 2.0 / 3.0) * (1 + 5.0 / 48 / (t * t));
    const double spacing = std::numbers::pi / std::sqrt(seed);
    double lo = seed - 0.25 * spacing, hi = seed + 0.25 * spacing;
    double flo = ai(-lo), fhi = ai(-hi);
    for (int grow = 0; flo * fhi > 0; ++grow) {
        if (grow > 40) throw AccuracyError("airy_zero: no bracket", seed, spacing);
        lo -= 0.1 * spacing;
        hi += 0.1 * spacing;
        flo = ai(-lo);
        fhi = ai(-hi);
    }
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ai(-mid);
        if (fm * flo > 0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double w = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const auto v = airy(-w);
        const double step = v.ai / v.aip;  // d/dw Ai(-w) = -Ai'(-w)
        w += step;
        if (std::abs(step) < 1e-15 * w) break;
    }
    return w;
}

inline std::vector<double> airy_zeros(int count) {
    if (count <= 0) throw ArgumentError("airy_zeros: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) out[static_cast<std::size_t>(k - 1)] = airy_zero(k);
    return out;
}

}  // namespace fd
