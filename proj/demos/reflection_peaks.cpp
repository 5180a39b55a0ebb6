// Sup-norm of the high-frequency Green function against time, with the
// detected peaks next to the reflection times 4 n sqrt(a) sqrt(1+a).
//
//   demo_reflection_peaks [log2(1/h)=6] [t_max=12]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "fd/decay.hpp"

int main(int argc, char** argv) {
    const int k = argc > 1 ? std::atoi(argv[1]) : 6;
    const double t_max = argc > 2 ? std::atof(argv[2]) : 12;
    const double h = std::ldexp(1.0, -k), a = 0.25;

    std::vector<double> ts;
    for (double t = 0.25; t <= t_max + 1e-12; t += 0.1) ts.push_back(t);
    auto c = fd::decay_scan_high(0, h, a, a, ts);

    std::printf("# h = 2^-%d, a = gamma = %.2f\n# t  sup|G|\n", k, a);
    for (std::size_t i = 0; i < ts.size(); ++i) std::printf("%7.3f  %.6e\n", ts[i], c.sup_values[i]);

    const auto env = fd::envelope_peaks(c.peaks, c.t_values, c.sup_values);
    const auto tn = fd::peak_times(a, static_cast<int>(env.size()));
    std::printf("\n# envelope peaks   t_n\n");
    for (std::size_t i = 0; i < env.size(); ++i) std::printf("%7.3f %.4e  %7.3f\n", env[i].t, env[i].height, tn[i]);
    if (env.size() >= 4) std::printf("# peak fit exponent %.4f\n", fd::fit_exponent(c, true).exponent);
}
