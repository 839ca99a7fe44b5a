// optimizer smoke runs
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>

#include "cars/cma_es.hpp"
#include "cars/objectives.hpp"
#include "cars/optimize.hpp"
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

static double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int main() {
    // sphere
    auto t0 = std::chrono::steady_clock::now();
    CmaEsConfig cfg;
    cfg.seed = 42;
    cfg.max_evals = 10000;
    cfg.tol_fun = 1e-14;
    auto sphere = cma_es_minimize(
        [](std::span<const double> x) {
            double s = 0;
            for (double v : x) s += (v - 0.7) * (v - 0.7);
            return s;
        },
        10, cfg);
    std::printf("sphere: best=%.3e evals=%lld conv=%d (%.0f ms)\n", sphere.best_value,
                sphere.evaluations, sphere.converged, now_ms(t0));

    // rosenbrock
    t0 = std::chrono::steady_clock::now();
    CmaEsConfig cfg2;
    cfg2.seed = 7;
    cfg2.max_evals = 60000;
    cfg2.restarts = 1;
    cfg2.tol_fun = 1e-14;
    auto rosen = cma_es_minimize(
        [](std::span<const double> x) {
            double s = 0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = 1.0 - x[i];
                s += 100 * a * a + b * b;
            }
            return s;
        },
        5, cfg2);
    std::printf("rosenbrock: best=%.3e evals=%lld conv=%d (%.0f ms)\n", rosen.best_value,
                rosen.evaluations, rosen.converged, now_ms(t0));

    // probe-only resonant peak optimization
    const auto config = default_config();
    t0 = std::chrono::steady_clock::now();
    OptimizeOptions opts;
    opts.objective = ObjectiveKind::ResonantPeak;
    opts.cma.seed = 2024;
    opts.cma.max_evals = 20000;
    opts.cma.tol_fun = 1e-12;
    opts.inject_analytic = false;  // make it work for the answer
    auto res = optimize_probe_phase(config, opts);
    const double target = analytic_max_pr(50.0, 4.8, 1.0);
    std::printf("resonant peak opt: J=%.6f target=%.6f gap=%.3e evals=%lld conv=%d (%.0f ms)\n",
                res.best_value, target, (target - res.best_value) / target, res.evaluations,
                res.converged, now_ms(t0));

    // phase shape vs arctan over +-2 delta
    const auto arct = arctan_scheme(4.8);
    double rms = 0;
    int cnt = 0;
    double mean = 0;
    for (double w = -100; w <= 100; w += 2.5) {
        mean += res.probe_phase(w) - arct(w);
        ++cnt;
    }
    mean /= cnt;
    for (double w = -100; w <= 100; w += 2.5) {
        const double d = res.probe_phase(w) - arct(w) - mean;
        rms += d * d;
    }
    std::printf("phase RMS vs arctan (+-2 delta, gauge-aligned) = %.4f rad\n", std::sqrt(rms / cnt));

    // broadband probe optimization, small budget
    t0 = std::chrono::steady_clock::now();
    OptimizeOptions bopts;
    bopts.objective = ObjectiveKind::Broadband;
    bopts.cma.seed = 5;
    bopts.cma.max_evals = 6000;
    bopts.inject_analytic = true;
    auto bres = optimize_probe_phase(config, bopts);
    std::printf("broadband opt: J=%.4f evals=%lld conv=%d (%.0f ms)\n", bres.best_value,
                bres.evaluations, bres.converged, now_ms(t0));

    // best pure delay via scan
    double best_tau = 0, best_j = -1e30;
    for (double tau = 100; tau <= 1500; tau += 12.5) {
        auto cfgd = config.with_probe_phase(time_delay_scheme(tau));
        const double j = broadband_objective(cfgd);
        if (j > best_j) {
            best_j = j;
            best_tau = tau;
        }
    }
    std::printf("best delay: tau=%.1f fs J=%.4f fraction=%.4f\n", best_tau, best_j,
                best_j / bres.best_value);
    return 0;
}
