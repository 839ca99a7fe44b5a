#include "cars/objectives.hpp"

#include <cmath>
#include <complex>

#include "cars/errors.hpp"
#include "cars/units.hpp"

namespace cars {

double local_objective(const CarsConfiguration& config, double k_weight, const EngineOptions& opts) {
    if (k_weight < 0.0) throw ConfigError("local_objective: weight must be >= 0");
    const double pr2 = std::norm(resonant_peak(config, opts));
    const double pnr2 = std::norm(nonresonant_peak(config, opts));
    return pr2 - k_weight * pnr2;
}

double broadband_objective(const CarsConfiguration& config, const FrequencyGrid& output_grid,
                           const EngineOptions& opts) {
    const PolarizationSpectrum spec = full_spectrum(config, output_grid, opts);
    return spec.integrated_resonant - spec.integrated_nonresonant;
}

double broadband_objective(const CarsConfiguration& config, const EngineOptions& opts) {
    return broadband_objective(config, default_output_grid(config, opts), opts);
}

ParetoPoint pareto_point(const CarsConfiguration& config, double k_weight, const EngineOptions& opts) {
    if (k_weight < 0.0) throw ConfigError("pareto_point: weight must be >= 0");
    ParetoPoint p;
    p.resonant_intensity = std::norm(resonant_peak(config, opts));
    p.nonresonant_intensity = std::norm(nonresonant_peak(config, opts));
    p.objective = p.resonant_intensity - k_weight * p.nonresonant_intensity;
    return p;
}

StationarityWorkspace stationarity_workspace(std::span<const double> phase_values,
                                             std::span<const double> offsets, double delta,
                                             double gamma_line, double lambda) {
    if (phase_values.size() != offsets.size())
        throw ConfigError("stationarity_workspace: phase/offsets size mismatch");
    if (!(delta > 0.0) || !(gamma_line > 0.0))
        throw ConfigError("stationarity_workspace: delta and gamma must be > 0");
    if (lambda < 0.0) throw ConfigError("stationarity_workspace: lambda must be >= 0");

    const std::size_t n = offsets.size();
    StationarityWorkspace ws;
    ws.offsets.assign(offsets.begin(), offsets.end());
    ws.phase.assign(phase_values.begin(), phase_values.end());
    ws.lambda = lambda;
    ws.a1.resize(n);
    ws.b1.resize(n);
    ws.a2.resize(n);
    ws.b2.resize(n);

    const double s = (n > 1) ? (offsets[1] - offsets[0]) : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = offsets[j];
        const double phi = phase_values[j];
        const double alpha = 0.5 * kPi - std::atan(w / gamma_line);
        const double root = std::sqrt(w * w + gamma_line * gamma_line);
        ws.a1[j] = std::sin(phi);
        ws.b1[j] = std::cos(phi);
        ws.a2[j] = std::sin(phi + alpha) / root;
        ws.b2[j] = std::cos(phi + alpha) / root;

        const double weight = std::exp(-1.5 * w * w / (delta * delta)) *
                              ((j == 0 || j + 1 == n) ? 0.5 : 1.0) * s;
        ws.A1 += weight * ws.a1[j];
        ws.B1 += weight * ws.b1[j];
        ws.A2 += weight * ws.a2[j];
        ws.B2 += weight * ws.b2[j];
    }

    const double scale =
        std::sqrt(ws.A2 * ws.A2 + ws.B2 * ws.B2 + lambda * lambda * (ws.A1 * ws.A1 + ws.B1 * ws.B1));
    if (!(scale > 0.0)) throw NumericsError("stationarity_workspace: degenerate normalization");

    ws.residual.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = lambda * (ws.a1[j] * ws.B1 - ws.A1 * ws.b1[j]) -
                         (ws.a2[j] * ws.B2 - ws.A2 * ws.b2[j]);
        ws.residual[j] = r / scale;
        ws.max_residual = std::max(ws.max_residual, std::abs(ws.residual[j]));
    }
    return ws;
}

double stationarity_residual(const PhaseProfile& probe_phase, double delta, double gamma_line,
                             double lambda, const FrequencyGrid& grid) {
    const auto offsets = grid.offsets();
    const auto phase = probe_phase.evaluate(offsets);
    return stationarity_workspace(phase, offsets, delta, gamma_line, lambda).max_residual;
}

double stationarity_residual(const PhaseProfile& probe_phase, double delta, double gamma_line,
                             double lambda) {
    const FrequencyGrid grid(0.0, 5.0 * delta, 4096);
    return stationarity_residual(probe_phase, delta, gamma_line, lambda, grid);
}

std::vector<double> peak_objective_phase_gradient(const ProbeShapingEngine& engine,
                                                  std::span<const double> probe_phase, double k_weight) {
    const auto peaks = engine.peaks(probe_phase);
    const auto& wr = engine.resonant_peak_weights();
    const auto& wnr = engine.nonresonant_peak_weights();

    std::vector<double> grad(probe_phase.size());
    for (std::size_t j = 0; j < probe_phase.size(); ++j) {
        const std::complex<double> rot(std::cos(probe_phase[j]), std::sin(probe_phase[j]));
        // d|P|^2/dphi_j = 2 Re(conj(P) * i * w_j e^{i phi_j})
        const double dr = 2.0 * std::real(std::conj(peaks.resonant) * std::complex<double>(0.0, 1.0) *
                                          wr[j] * rot);
        const double dnr = 2.0 * std::real(std::conj(peaks.nonresonant) * std::complex<double>(0.0, 1.0) *
                                           wnr[j] * rot);
        grad[j] = dr - k_weight * dnr;
    }
    return grad;
}

}  // namespace cars
