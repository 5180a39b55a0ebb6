#pragma once

// The phase L(w) = pi + i log(A_-(w)/A_+(w)) with its derivatives, the
// remainder B(u) = (4/3)u + pi/2 - L(u^{2/3}), and the table of Airy zeros.
//
// On the real axis A_+(w) = (Ai(-w) - i Bi(-w))/2, so L = pi + 2 arg A_+ and
// L'(w) = 2 / (pi (Ai^2 + Bi^2)(-w)) by the Wronskian.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fd/airy.hpp"

namespace fd {

struct LValues {
    double l;    // L(w)
    double lp;   // L'(w)
    double lpp;  // L''(w)
};

struct BValues {
    double b;   // B(u)
    double bp;  // B'(u)
};

namespace detail {

inline constexpr double kTwoPi = 2 * std::numbers::pi;

// Large positive w: L = (4/3)w^{3/2} + pi/2 - 2 atan(Q/P).
inline LValues big_l_oscillatory(double w) {
    const double zeta = 2.0 / 3.0 * w * std::sqrt(w);
    const auto o = oscillatory_series(zeta);
    const double m2 = o.p * o.p + o.q * o.q;
    return {4.0 / 3.0 * w * std::sqrt(w) + std::numbers::pi / 2 - 2 * std::atan2(o.q, o.p),
            2 * std::sqrt(w) / m2, 4 * w * (o.q * o.r - o.p * o.s) / (m2 * m2)};
}

// Large negative w: Ai(-w) is exponentially small and Bi(-w) exponentially large.
inline LValues big_l_evanescent(double w) {
    const auto s = scaled_positive(-w);
    const double e2 = std::exp(-2 * s.zeta);
    const double ratio = e2 * s.ai_s / s.bi_s;
    const double m2s = s.bi_s * s.bi_s * (1 + ratio * ratio);
    // d/dw of (Ai^2+Bi^2)(-w) is -2(Ai Ai' + Bi Bi')(-w); here dominated by Bi Bi'.
    const double cross = s.bi_s * s.bip_s + e2 * e2 * s.ai_s * s.aip_s;
    return {2 * std::atan(ratio), 2 * e2 / (std::numbers::pi * m2s),
            4 * e2 * cross / (std::numbers::pi * m2s * m2s)};
}

inline double l_leading(double w) {
    return 4.0 / 3.0 * w * std::sqrt(w) + std::numbers::pi / 2 - 5.0 / 24.0 / (w * std::sqrt(w));
}

}  // namespace detail

inline LValues big_l_values(double w) {
    detail::require_finite(w, "big_l");
    if (w >= detail::kSeriesRadius) return detail::big_l_oscillatory(w);
    if (w <= -detail::kSeriesRadius) return detail::big_l_evanescent(w);
    const auto v = detail::airy_series(-w);
    const double m2 = v.ai * v.ai + v.bi * v.bi;
    double l = std::numbers::pi + 2 * std::atan2(-v.bi, v.ai);
    if (w < 1.5) {
        // L increases from 0 to 2 pi on (-inf, w_1); pick that branch.
        while (l < 0) l += detail::kTwoPi;
        while (l >= detail::kTwoPi) l -= detail::kTwoPi;
    } else {
        const double est = detail::l_leading(w);
        l += detail::kTwoPi * std::round((est - l) / detail::kTwoPi);
    }
    return {l, 2 / (std::numbers::pi * m2),
            4 * (v.ai * v.aip + v.bi * v.bip) / (std::numbers::pi * m2 * m2)};
}

inline double big_l(double w) { return big_l_values(w).l; }
inline double big_l_deriv(double w) { return big_l_values(w).lp; }

// L by continuous tracking of arg A_+ from w = 0, where L = pi/3. Steps are
// halved until |delta arg A_+| < pi/4. Slow; kept as an independent route.
inline double big_l_tracked(double w, double step = 0.05) {
    detail::require_finite(w, "big_l_tracked");
    double pos = 0.0;
    double l = std::numbers::pi / 3;
    std::complex<double> prev = a_plus(0.0);
    const double dir = w >= 0 ? 1.0 : -1.0;
    double h = step;
    while (dir * (w - pos) > 0) {
        const double next = dir > 0 ? std::min(w, pos + h) : std::max(w, pos - h);
        const std::complex<double> cur = a_plus(next);
        const double darg = std::arg(cur / prev);
        if (std::abs(darg) >= std::numbers::pi / 4) {
            h *= 0.5;
            if (h < 1e-12)
                throw AccuracyError("big_l_tracked: phase continuity lost; reduce the initial step", l,
                                    std::numbers::pi);
            continue;
        }
        l += 2 * darg;
        pos = next;
        prev = cur;
        h = std::min(step, 2 * h);
    }
    return l;
}

// B(u) and B'(u) for u > 0.
inline BValues b_remainder(double u) {
    if (!(u > 0)) throw DomainError("b_remainder: u must be positive");
    const double w = std::cbrt(u * u);
    if (w >= detail::kSeriesRadius) {
        const auto o = detail::oscillatory_series(2.0 / 3.0 * u);
        const double m2 = o.p * o.p + o.q * o.q;
        const double m2_minus_1 = 2 * o.p_minus_1 + o.p_minus_1 * o.p_minus_1 + o.q * o.q;
        return {2 * std::atan2(o.q, o.p), 4.0 / 3.0 * m2_minus_1 / m2};
    }
    const auto lv = big_l_values(w);
    return {4.0 / 3.0 * u + std::numbers::pi / 2 - lv.l, 4.0 / 3.0 - 2.0 / 3.0 / std::cbrt(u) * lv.lp};
}

// Zeros w_k of Ai(-.) with Ai'(-w_k) and L'(w_k) = 2 pi Ai'(-w_k)^2.
class AiryTable {
public:
    explicit AiryTable(int count) {
        if (count <= 0) throw ArgumentError("AiryTable: count must be positive");
        zeros_ = airy_zeros(count);
        aiprime_.reserve(zeros_.size());
        lprime_.reserve(zeros_.size());
        for (double w : zeros_) {
            const double d = ai_deriv(-w);
            aiprime_.push_back(d);
            lprime_.push_back(2 * std::numbers::pi * d * d);
        }
    }

    int count() const { return static_cast<int>(zeros_.size()); }
    const std::vector<double>& zeros() const { return zeros_; }
    const std::vector<double>& aiprime_at_zeros() const { return aiprime_; }
    const std::vector<double>& lprime() const { return lprime_; }

    // 1-based accessors.
    double omega(int k) const { return zeros_[index(k)]; }
    double aiprime(int k) const { return aiprime_[index(k)]; }
    double lprime_at_zero(int k) const { return lprime_[index(k)]; }

    // Number of zeros w_k <= w.
    int count_below(double w) const {
        return static_cast<int>(std::upper_bound(zeros_.begin(), zeros_.end(), w) - zeros_.begin());
    }

private:
    std::size_t index(int k) const {
        if (k < 1 || k > count()) throw ArgumentError("AiryTable: mode index out of range");
        return static_cast<std::size_t>(k - 1);
    }

    std::vector<double> zeros_;
    std::vector<double> aiprime_;
    std::vector<double> lprime_;
};

inline constexpr int kDefaultTableSize = 4096;

// Shared table, built once on first use.
inline const AiryTable& airy_table() {
    static const AiryTable table(kDefaultTableSize);
    return table;
}

inline double lprime_at_zero(int k) { return airy_table().lprime_at_zero(k); }

}  // namespace fd
