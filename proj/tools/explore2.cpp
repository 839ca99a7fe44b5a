// gamma fixed-point landscape scan
#include <cmath>
#include <complex>
#include <cstdio>

#include "cars/objectives.hpp"
#include "cars/polarization.hpp"
#include "cars/schemes.hpp"

using namespace cars;

static CarsConfiguration default_config() {
    SpectralField pump{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField stokes{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField probe{1.0, 0.0, 50.0, PhaseProfile{}};
    MediumParams medium{0.0, 4.8, 1.0, 0.1};
    return CarsConfiguration::three_pulse(pump, stokes, probe, medium);
}

// B1/A2 quadratures at a given coefficient c = lambda*gamma
static double gamma_map(double c, double delta, double gamma_line) {
    const int n = 8192;
    const double hw = 5.0 * delta;
    const double s = 2.0 * hw / n;
    double b1 = 0.0, a2 = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double x = -hw + j * s;
        const double wq = (j == 0 || j == n) ? 0.5 : 1.0;
        const double g = std::exp(-1.5 * x * x / (delta * delta)) * wq;
        const double d = gamma_line - c * (x * x + gamma_line * gamma_line);
        const double r = std::hypot(x, d);
        b1 += g * d / r;
        a2 += g * (x * x + d * gamma_line) / (r * (x * x + gamma_line * gamma_line));
    }
    return b1 / a2;
}

int main() {
    const auto cfg = default_config();
    const double delta = 50.0, gamma_line = 4.8;

    for (double lambda : {0.001, 0.01, 0.1, 1.0, 10.0}) {
        double best_c = 0, best_j = -1e30;
        for (int i = 0; i <= 300; ++i) {
            const double c = 0.003 * i;  // c in [0, 0.9]
            auto probe_cfg = cfg.with_probe_phase(PhaseProfile(ModifiedArctanPhase{gamma_line, c}));
            const double pr2 = std::norm(resonant_peak(probe_cfg));
            const double pnr2 = std::norm(nonresonant_peak(probe_cfg));
            const double j = pr2 - (lambda / 0.01) * pnr2;  // k = lambda/(chi/C)^2
            if (j > best_j) {
                best_j = j;
                best_c = c;
            }
        }
        // fixed point residual at the J-optimal c: lambda*gamma_map(c) - c
        const double g = gamma_map(best_c, delta, gamma_line);
        auto probe_cfg = cfg.with_probe_phase(PhaseProfile(ModifiedArctanPhase{gamma_line, best_c}));
        std::printf("lambda=%-7g best c=%.4f J=%.6f |P_r|^2=%.6f |P_nr|^2=%.4e  gamma(c)=%.5f  lam*g=%.5f\n",
                    lambda, best_c, best_j, std::norm(resonant_peak(probe_cfg)),
                    std::norm(nonresonant_peak(probe_cfg)), g, lambda * g);
    }

    // map shape at lambda=0.01: gamma -> B1/A2 at c = lambda*gamma
    std::printf("\nmap at lambda=0.01:\n");
    for (double gamma_val : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.8}) {
        std::printf("  gamma=%.3f -> F=%.6f\n", gamma_val, gamma_map(0.01 * gamma_val, delta, gamma_line));
    }
    return 0;
}
