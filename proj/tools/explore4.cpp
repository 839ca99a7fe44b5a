// joint-optimization smoke runs (three-pulse and two-pulse)
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "cars/objectives.hpp"
#include "cars/optimize.hpp"
#include "cars/schemes.hpp"

using namespace cars;

static double now_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// least-squares fit phi ~ a + b*w over the window, shared slope across two
// masks; returns rms residual
struct LinFit {
    double slope, rms;
};

static LinFit common_slope_fit(const PhaseProfile& pa, double wa, const PhaseProfile& pb, double wb) {
    std::vector<double> xs, ys;
    std::vector<int> which;
    for (int i = -40; i <= 40; ++i) {
        xs.push_back(wa * i / 40.0);
        ys.push_back(pa(xs.back()));
        which.push_back(0);
    }
    for (int i = -40; i <= 40; ++i) {
        xs.push_back(wb * i / 40.0);
        ys.push_back(pb(xs.back()));
        which.push_back(1);
    }
    // unknowns: a0, a1, b  (two intercepts, one slope)
    double s_x2 = 0, n0 = 0, n1 = 0, s_x_y = 0, s_y0 = 0, s_y1 = 0, s_x0 = 0, s_x1 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s_x2 += xs[i] * xs[i];
        s_x_y += xs[i] * ys[i];
        if (which[i] == 0) {
            n0 += 1;
            s_y0 += ys[i];
            s_x0 += xs[i];
        } else {
            n1 += 1;
            s_y1 += ys[i];
            s_x1 += xs[i];
        }
    }
    // normal equations with symmetric windows (sum x over each mask = 0)
    const double b = s_x_y / s_x2;
    const double a0 = s_y0 / n0, a1 = s_y1 / n1;
    double rms = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double model = (which[i] == 0 ? a0 : a1) + b * xs[i];
        rms += (ys[i] - model) * (ys[i] - model);
    }
    return {b, std::sqrt(rms / xs.size())};
}

int main() {
    // --- three-pulse joint, unequal bandwidths ---
    SpectralField pump{1.0, 0.0, 125.0, PhaseProfile{}};
    SpectralField stokes{1.0, 0.0, 100.0, PhaseProfile{}};
    SpectralField probe{1.0, 0.0, 80.0, PhaseProfile{}};
    MediumParams medium{0.0, 4.8, 1.0, 0.1};
    auto cfg3 = CarsConfiguration::three_pulse(pump, stokes, probe, medium);

    const double target3 = std::norm(resonant_peak(cfg3.with_probe_phase(arctan_scheme(4.8))));
    std::printf("three-pulse probe-only arctan target: %.6f\n", target3);

    auto t0 = std::chrono::steady_clock::now();
    OptimizeOptions jopts;
    jopts.objective = ObjectiveKind::ResonantPeak;
    jopts.cma.seed = 11;
    jopts.cma.max_evals = 60000;
    jopts.cma.tol_fun = 1e-11;
    auto jres = optimize_all_pulses(cfg3, ShapeSelection{true, true, true}, jopts);
    std::printf("joint: J=%.6f frac=%.5f evals=%lld conv=%d (%.1f s)\n", jres.best_value,
                jres.best_value / target3, jres.evaluations, jres.converged, now_s(t0));
    const auto fit = common_slope_fit(*jres.pump_phase, 2 * 125.0, *jres.stokes_phase, 2 * 100.0);
    std::printf("pump/stokes common-slope fit: slope=%.5f rms=%.4f rad\n", fit.slope, fit.rms);

    // --- two-pulse composite ---
    SpectralField pump2{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField stokes2{1.0, 0.0, 50.0, PhaseProfile{}};
    auto cfg2 = CarsConfiguration::two_pulse(pump2, stokes2, medium);

    t0 = std::chrono::steady_clock::now();
    OptimizeOptions topts;
    topts.objective = ObjectiveKind::ResonantPeak;
    topts.cma.seed = 12;
    topts.cma.max_evals = 40000;
    topts.cma.tol_fun = 1e-11;
    auto tres = optimize_all_pulses(cfg2, ShapeSelection{true, false, false}, topts);
    std::printf("two-pulse: J=%.6f evals=%lld conv=%d (%.1f s)\n", tres.best_value, tres.evaluations,
                tres.converged, now_s(t0));

    // composite fit: phi ~ a + slope*w + arctan(w/G)/2 over +-2 delta
    const auto& mask = tres.probe_phase;
    double s_x2 = 0, s_xy = 0, s_y = 0, n = 0;
    for (int i = -40; i <= 40; ++i) {
        const double w = 100.0 * i / 40.0;
        const double resid = mask(w) - 0.5 * std::atan(w / 4.8);
        s_x2 += w * w;
        s_xy += w * resid;
        s_y += resid;
        n += 1;
    }
    const double slope = s_xy / s_x2, a = s_y / n;
    double rms = 0;
    for (int i = -40; i <= 40; ++i) {
        const double w = 100.0 * i / 40.0;
        const double d = mask(w) - (a + slope * w + 0.5 * std::atan(w / 4.8));
        rms += d * d;
    }
    rms = std::sqrt(rms / n);
    std::printf("two-pulse composite fit: slope=%.5f rms=%.4f rad\n", slope, rms);

    // reference: TLP pump two-pulse value and composite-scheme value
    const double tlp2 = std::norm(resonant_peak(cfg2));
    std::printf("two-pulse TLP |P_r|^2 = %.6f\n", tlp2);
    double best_comp = -1e30, best_slope = 0;
    for (int i = -40; i <= 40; ++i) {
        const double sl = 0.002 * i;
        auto c = cfg2.with_probe_phase(two_pulse_composite_scheme(4.8, sl));
        const double j = std::norm(resonant_peak(c));
        if (j > best_comp) {
            best_comp = j;
            best_slope = sl;
        }
    }
    std::printf("best composite: slope=%.4f J=%.6f cma/composite=%.5f\n", best_slope, best_comp,
                tres.best_value / best_comp);
    return 0;
}
