// Scratch numeric exploration used while pinning down reference constants.
#include <complex>
#include <cstdio>

#include "cars/bessel.hpp"
#include "cars/field.hpp"
#include "cars/objectives.hpp"
#include "cars/optimize.hpp"
#include "cars/polarization.hpp"
#include "cars/schemes.hpp"
#include "cars/units.hpp"

using namespace cars;

static CarsConfiguration default_config() {
    SpectralField pump{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField stokes{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField probe{1.0, 0.0, 50.0, PhaseProfile{}};
    MediumParams medium{0.0, 4.8, 1.0, 0.1};
    return CarsConfiguration::three_pulse(pump, stokes, probe, medium);
}

int main() {
    const CarsConfiguration tlp = default_config();
    const double gamma = tlp.medium.half_linewidth;
    const double delta = tlp.probe.bandwidth;

    std::printf("K0(0.006912)        = %.12f\n", bessel_k0(3 * gamma * gamma / (4 * delta * delta)));
    std::printf("analytic_max_pr     = %.6f\n", analytic_max_pr(delta, gamma, 1.0));

    auto arct = tlp.with_probe_phase(arctan_scheme(gamma));
    std::printf("|P_r|^2 arctan      = %.6f\n", std::norm(resonant_peak(arct)));
    std::printf("|P_nr|^2 arctan     = %.6f\n", std::norm(nonresonant_peak(arct)));

    auto pistep = tlp.with_probe_phase(pi_step_scheme({0.0}));
    std::printf("|P_r|^2 pi-step     = %.6f\n", std::norm(resonant_peak(pistep)));
    std::printf("|P_nr|^2 pi-step    = %.3e\n", std::norm(nonresonant_peak(pistep)));

    std::printf("|P_nr|^2 TLP        = %.6f (chi^2 pi^2 delta/3 = %.6f)\n",
                std::norm(nonresonant_peak(tlp)), 0.01 * kPi * kPi * delta / 3.0);

    // gamma fixed point across lambda
    for (double lambda : {0.0, 0.001, 0.01, 0.1, 1.0, 10.0}) {
        auto r = solve_gamma(lambda, delta, gamma);
        std::printf("lambda=%-8g gamma=%.8f iters=%d resid=%.2e conv=%d lam*g=%g\n", lambda, r.gamma,
                    r.iterations, r.residual, r.converged, lambda * r.gamma);
    }

    // modified arctan limits
    for (double k : {0.0, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const double lambda = tlp.medium.lambda_from_weight(k);
        auto cfg = tlp.with_probe_phase(modified_arctan_scheme(lambda, delta, gamma));
        const double pr2 = std::norm(resonant_peak(cfg));
        const double pnr2 = std::norm(nonresonant_peak(cfg));
        std::printf("k=%-7g |P_r|^2=%.6f |P_nr|^2=%.3e J=%.6f ratio=%.3e\n", k, pr2, pnr2,
                    pr2 - k * pnr2, pnr2 / pr2);
    }

    // broadband: TLP vs delay vs ladder
    const auto out_grid = default_output_grid(tlp);
    auto spec_tlp = full_spectrum(tlp, out_grid);
    std::printf("TLP   I_r=%.6f I_nr=%.6f J=%.6f\n", spec_tlp.integrated_resonant,
                spec_tlp.integrated_nonresonant,
                spec_tlp.integrated_resonant - spec_tlp.integrated_nonresonant);

    const double tau_match = 1.0 / (kSpeedOfLight * delta);
    for (double tau : {tau_match, -tau_match, 2 * tau_match}) {
        auto cfg = tlp.with_probe_phase(time_delay_scheme(tau));
        auto spec = full_spectrum(cfg, out_grid);
        std::printf("delay %+8.1f fs I_r=%.6f I_nr=%.6e J=%.6f\n", tau, spec.integrated_resonant,
                    spec.integrated_nonresonant,
                    spec.integrated_resonant - spec.integrated_nonresonant);
    }
    auto ladder = tlp.with_probe_phase(multi_pi_step_ladder(8, delta / 2.0));
    auto spec_ladder = full_spectrum(ladder, out_grid);
    std::printf("ladder I_r=%.6f I_nr=%.6e peak|P_r|^2=%.6f\n", spec_ladder.integrated_resonant,
                spec_ladder.integrated_nonresonant, std::norm(resonant_peak(ladder)));

    // L2 distance between |P_nr| of ladder and matched delay
    auto spec_delay = full_spectrum(tlp.with_probe_phase(time_delay_scheme(tau_match)), out_grid);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < spec_delay.nonresonant.size(); ++i) {
        const double a = std::abs(spec_ladder.nonresonant[i]);
        const double b = std::abs(spec_delay.nonresonant[i]);
        num += (a - b) * (a - b);
        den += b * b;
    }
    std::printf("ladder-vs-delay |P_nr| rel L2 = %.4f\n", std::sqrt(num / den));
    return 0;
}
