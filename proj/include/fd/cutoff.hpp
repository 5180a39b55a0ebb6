#pragma once

// Smooth cutoffs built from g(u) = exp(-1/u): a C-infinity step
// S(u) = g(u) / (g(u) + g(1 - u)) rising from 0 at u <= 0 to 1 at u >= 1.

#include <cmath>
#include <limits>

namespace fd {

inline double smooth_step(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    const double a = std::exp(-1 / u), b = std::exp(-1 / (1 - u));
    return a / (a + b);
}

enum class CutoffKind { psi1, psi, psi2, phi, chi0, chi1 };

struct Cutoff {
    CutoffKind kind;
    double support_lo, support_hi;
    double plateau_lo, plateau_hi;
    double delta;  // narrowest transition width

    double operator()(double x) const {
        if (kind == CutoffKind::psi2) return phi_even(x) - phi_even(2 * x);
        if (x <= support_lo || x >= support_hi) return 0;
        const double up = std::isinf(support_lo) ? 1 : smooth_step((x - support_lo) / (plateau_lo - support_lo));
        const double down =
            std::isinf(support_hi) ? 1 : smooth_step((support_hi - x) / (support_hi - plateau_hi));
        return up * down;
    }

    bool in_support(double x) const { return x > support_lo && x < support_hi; }

private:
    static double phi_even(double x) {
        const double r = std::abs(x);
        return r <= 1.5 ? 1.0 : smooth_step((2 - r) / 0.5);
    }
};

namespace cutoffs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// psi_1: support [1/2, 3/2], equal to 1 on [3/4, 5/4].
inline constexpr Cutoff psi1{CutoffKind::psi1, 0.5, 1.5, 0.75, 1.25, 0.25};
// psi: support [1/2, 3/2], equal to 1 on [7/10, 13/10].
inline constexpr Cutoff psi{CutoffKind::psi, 0.5, 1.5, 0.7, 1.3, 0.2};
// psi_2(r) = phi(r) - phi(2r): support [3/4, 2], equal to 1 on [1, 3/2].
inline constexpr Cutoff psi2{CutoffKind::psi2, 0.75, 2.0, 1.0, 1.5, 0.25};
// phi: even, support (-2, 2), equal to 1 on [-3/2, 3/2].
inline constexpr Cutoff phi{CutoffKind::phi, -2.0, 2.0, -1.5, 1.5, 0.5};
// chi_0: even, support [-2, 2], equal to 1 on [-3/2, 3/2].
inline constexpr Cutoff chi0{CutoffKind::chi0, -2.0, 2.0, -1.5, 1.5, 0.5};
// chi_1: 0 below 1, equal to 1 from 2 on.
inline constexpr Cutoff chi1{CutoffKind::chi1, 1.0, kInf, 2.0, kInf, 1.0};

}  // namespace cutoffs

}  // namespace fd
