#include "cars/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cars/objectives.hpp"
#include "cars/schemes.hpp"

namespace cars {

namespace {

// Equal-bandwidth three-pulse reference with an arctan probe; the analytic
// peak value is exact for this configuration.
CarsConfiguration arctan_reference(const Scenario& s) {
    const double bw = s.mode == "two_pulse" ? s.pump.bandwidth_cm1 : s.probe.bandwidth_cm1;
    SpectralField pump{1.0, 0.0, bw, PhaseProfile{}};
    SpectralField stokes{1.0, 0.0, bw, PhaseProfile{}};
    SpectralField probe{1.0, 0.0, bw, arctan_scheme(s.medium.half_linewidth)};
    return CarsConfiguration::three_pulse(pump, stokes, probe, s.medium);
}

}  // namespace

std::vector<DiagnosticResult> run_diagnostics(const Scenario& scenario) {
    std::vector<DiagnosticResult> results;
    const MediumParams& medium = scenario.medium;
    const double gamma_line = medium.half_linewidth;
    const CarsConfiguration reference = arctan_reference(scenario);
    const double ref_bw = reference.probe.bandwidth;

    {  // gamma fixed point identity at lambda = 0
        const GammaSolveResult r = solve_gamma(0.0, ref_bw, gamma_line);
        DiagnosticResult d{"gamma_identity_lambda0", false, std::abs(r.gamma - gamma_line), 1e-10,
                           "gamma(0) == half linewidth"};
        d.passed = r.converged && d.value <= d.threshold;
        results.push_back(d);
    }

    {  // gamma convergence across the scenario's lambda values
        double worst_residual = 0.0;
        int worst_iterations = 0;
        bool all_converged = true;
        for (double lambda : gamma_lambda_values(scenario)) {
            GammaSolveOptions opts;
            opts.tol = 1e-10;
            const GammaSolveResult r = solve_gamma(lambda, ref_bw, gamma_line, opts);
            all_converged = all_converged && r.converged;
            worst_residual = std::max(worst_residual, r.residual);
            worst_iterations = std::max(worst_iterations, r.iterations);
        }
        DiagnosticResult d{"gamma_convergence", false, worst_residual, 1e-10,
                           "worst residual; worst iterations " + std::to_string(worst_iterations)};
        d.passed = all_converged && worst_iterations < 100 && worst_residual <= d.threshold;
        results.push_back(d);
    }

    {  // quadrature peak vs analytic closed form
        const EngineOptions opts = engine_options(scenario);
        const double quad = std::norm(resonant_peak(reference, opts));
        const double analytic = analytic_max_pr(ref_bw, gamma_line, medium.resonant_constant);
        DiagnosticResult d{"analytic_vs_quadrature", false, std::abs(quad - analytic) / analytic, 1e-3,
                           "peak resonant intensity, arctan probe"};
        d.passed = d.value <= d.threshold;
        results.push_back(d);
    }

    {  // FFT convolution vs direct quadrature on a coarse grid
        EngineOptions coarse;
        coarse.n_points = 128;
        coarse.half_width_factor = 5.0;
        const FrequencyGrid out = default_output_grid(reference, coarse, 6.0);
        EngineOptions direct = coarse;
        direct.path = EvalPath::Direct;
        EngineOptions fft = coarse;
        fft.path = EvalPath::Fft;
        const PolarizationSpectrum a = full_spectrum(reference, out, direct);
        const PolarizationSpectrum b = full_spectrum(reference, out, fft);
        double scale = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < a.resonant.size(); ++i)
            scale = std::max({scale, std::abs(a.resonant[i]), std::abs(a.nonresonant[i])});
        for (std::size_t i = 0; i < a.resonant.size(); ++i) {
            worst = std::max(worst, std::abs(a.resonant[i] - b.resonant[i]) / scale);
            worst = std::max(worst, std::abs(a.nonresonant[i] - b.nonresonant[i]) / scale);
        }
        DiagnosticResult d{"convolution_vs_direct", false, worst, 1e-6, "coarse 128-point grid"};
        d.passed = d.value <= d.threshold;
        results.push_back(d);
    }

    {  // grid refinement stability of the reference peaks
        EngineOptions base = engine_options(scenario);
        EngineOptions fine = base;
        fine.n_points = 2 * base.n_points;
        const double pr_base = std::norm(resonant_peak(reference, base));
        const double pr_fine = std::norm(resonant_peak(reference, fine));
        const double pnr_base = std::norm(nonresonant_peak(reference, base));
        const double pnr_fine = std::norm(nonresonant_peak(reference, fine));
        const double rel = std::max(std::abs(pr_fine - pr_base) / pr_fine,
                                    std::abs(pnr_fine - pnr_base) / pnr_fine);
        DiagnosticResult d{"grid_refinement", false, rel, 1e-6,
                           "peak change doubling " + std::to_string(base.n_points) + " points"};
        d.passed = d.value <= d.threshold;
        results.push_back(d);
    }

    {  // stationarity of the scenario's probe mask
        const CarsConfiguration config = build_configuration(scenario);
        const double lambda =
            scenario.objective == "local_difference" ? medium.lambda_from_weight(scenario.k_weight) : 0.0;
        const double residual = stationarity_residual(config.probe_field().phase,
                                                      config.probe_field().bandwidth, gamma_line, lambda);
        DiagnosticResult d{"probe_phase_stationarity", false, residual, 1e-6,
                           "scenario probe mask, lambda=" + std::to_string(lambda)};
        d.passed = d.value <= d.threshold;
        results.push_back(d);
    }

    return results;
}

bool all_passed(const std::vector<DiagnosticResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const DiagnosticResult& d) { return d.passed; });
}

}  // namespace cars
