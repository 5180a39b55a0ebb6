#pragma once

// Gallery modes of -d^2/dx^2 + (1 + x) theta^2 on x > 0 with Dirichlet data:
// e_k(x, theta) = sqrt(2 pi) |theta|^{1/3} / sqrt(L'(w_k)) Ai(|theta|^{2/3} x - w_k)
// with eigenvalue lambda_k(theta) = theta^2 + w_k |theta|^{4/3}.

#include <cmath>
#include <functional>
#include <numbers>

#include "fd/quadrature.hpp"
#include "fd/spectral_phase.hpp"

namespace fd {

struct Eigenmode {
    int k;
    double theta;
    double lambda;
    double normalizer;

    double operator()(double x) const {
        if (x < 0) throw DomainError("eigenfunction: x < 0");
        const double s = std::cbrt(theta * theta);
        return normalizer * ai(s * x - airy_table().omega(k));
    }

    // Right end of the oscillatory region.
    double turning_point() const { return airy_table().omega(k) / std::cbrt(theta * theta); }
};

inline void check_mode_args(int k, double theta) {
    if (k < 1) throw ArgumentError("mode index must be >= 1");
    if (theta == 0 || !std::isfinite(theta)) throw DomainError("theta must be finite and non-zero");
}

inline double eigenvalue(int k, double theta) {
    check_mode_args(k, theta);
    const double t2 = theta * theta;
    return t2 + airy_table().omega(k) * std::cbrt(t2 * t2);
}

inline Eigenmode eigenmode(int k, double theta) {
    check_mode_args(k, theta);
    const double norm =
        std::sqrt(2 * std::numbers::pi) * std::cbrt(std::abs(theta)) / std::sqrt(airy_table().lprime_at_zero(k));
    return {k, theta, eigenvalue(k, theta), norm};
}

inline double eigenfunction(int k, double theta, double x) { return eigenmode(k, theta)(x); }

struct ModeIntegral {
    double value;
    double error;      // quadrature estimate
    double tail_bound; // analytic bound on the part beyond the cut
};

// int_0^inf e_j e_k dx. The integrand is cut at max turning point + 10 |theta|^{-2/3};
// the tail is bounded by the product of the two Airy tails.
inline ModeIntegral mode_overlap(int j, int k, double theta, double tol = 1e-13) {
    const auto ej = eigenmode(j, theta), ek = eigenmode(k, theta);
    const double s = std::cbrt(theta * theta);
    const double cut = std::max(ej.turning_point(), ek.turning_point()) + 10 / s;
    const auto r = integrate_adaptive([&](double x) { return ej(x) * ek(x); }, 0.0, cut, tol, 48, 4 * std::max(j, k) + 8);
    // int_c^inf Ai^2 = Ai'(c)^2 - c Ai(c)^2 <= Ai'(c)^2 for c > 0, in the variable u = s x.
    const double c = 10.0;
    const double tail = std::abs(ej.normalizer * ek.normalizer) / s * ai_deriv(c) * ai_deriv(c);
    return {r.value, r.error, tail};
}

inline ModeIntegral mode_norm_squared(int k, double theta, double tol = 1e-13) {
    return mode_overlap(k, k, theta, tol);
}

// Sign changes of e_k on (0, turning point), sampled on n points.
inline int interior_zero_count(int k, double theta, int n = 20000) {
    const auto e = eigenmode(k, theta);
    const double end = e.turning_point();
    int count = 0;
    double prev = e(end / n);
    for (int i = 2; i < n; ++i) {
        const double v = e(end * i / n);
        if ((v > 0) != (prev > 0)) ++count;
        prev = v;
    }
    return count;
}

// Central-difference application of -d^2/dx^2 + (1 + x) theta^2 to e_k at x.
inline double apply_operator_fd(int k, double theta, double x, double step) {
    const auto e = eigenmode(k, theta);
    const double c = e(x);
    const double second = (e(x + step) - 2 * c + e(x - step)) / (step * step);
    return -second + (1 + x) * theta * theta * c;
}

struct DiracSum {
    double value;
    double error;
};

// int f(x) sum_{k <= K} e_k(x) e_k(x0) dx for f supported in [lo, hi].
inline DiracSum dirac_partial_sum(double x0, double theta, int K, const std::function<double(double)>& testfn,
                                  double lo, double hi, double tol = 1e-12) {
    if (!(x0 > 0)) throw DomainError("dirac_partial_sum: x0 must be positive");
    if (K < 1) throw ArgumentError("dirac_partial_sum: K must be >= 1");
    if (!(lo >= 0) || !(hi > lo)) throw ArgumentError("dirac_partial_sum: bad support");
    double sum = 0, err = 0;
    for (int k = 1; k <= K; ++k) {
        const auto e = eigenmode(k, theta);
        const auto r = integrate_adaptive([&](double x) { return testfn(x) * e(x); }, lo, hi, tol / K, 48, 16);
        sum += r.value * e(x0);
        err += r.error * std::abs(e(x0));
    }
    return {sum, err};
}

}  // namespace fd
