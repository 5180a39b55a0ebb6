// Both sides of the Airy-Poisson identity for a bump around one Airy zero,
// as the number of reflections grows.
//
//   demo_poisson_identity [k=1] [width=0.3]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fd/parametrix.hpp"

int main(int argc, char** argv) {
    const int k = argc > 1 ? std::atoi(argv[1]) : 1;
    const double width = argc > 2 ? std::atof(argv[2]) : 0.3;
    const double w = fd::airy_zero(k);
    const auto f = fd::bump(w, width);

    std::printf("# bump at omega_%d = %.10f, width %.3f\n# Nmax  lhs  rhs  relerr\n", k, w, width);
    for (int n : {0, 10, 25, 50, 100, 200, 400}) {
        const auto r = fd::airy_poisson_check(f, w - width / 2, w + width / 2, n);
        std::printf("%5d  %.12f  %.12f  %.3e\n", n, r.lhs, r.rhs, std::abs(r.lhs - r.rhs) / r.rhs);
    }
}
