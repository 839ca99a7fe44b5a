#pragma once

#include <span>
#include <vector>

#include "cars/polarization.hpp"

namespace cars {

// Objective functionals and the variational optimality diagnostics.

// J = |P_r(0)|^2 - k |P_nr(0)|^2, the weighted balance of peak signal and
// peak background.
double local_objective(const CarsConfiguration& config, double k_weight, const EngineOptions& opts = {});

// J = I_r - I_nr over the given output grid.
double broadband_objective(const CarsConfiguration& config, const FrequencyGrid& output_grid,
                           const EngineOptions& opts = {});
double broadband_objective(const CarsConfiguration& config, const EngineOptions& opts = {});

struct ParetoPoint {
    double resonant_intensity = 0.0;     // |P_r(0)|^2
    double nonresonant_intensity = 0.0;  // |P_nr(0)|^2
    double objective = 0.0;              // J at the given weight
};

ParetoPoint pareto_point(const CarsConfiguration& config, double k_weight, const EngineOptions& opts = {});

// Pointwise quantities of the probe-only stationarity condition, evaluated
// for a sampled phase on a symmetric grid:
//   alpha = pi/2 - arctan(w/G),   a1 = sin Phi, b1 = cos Phi,
//   a2 = sin(Phi+alpha)/sqrt(w^2+G^2), b2 = cos(Phi+alpha)/sqrt(w^2+G^2),
// with A1,B1,A2,B2 their Gaussian-weighted trapezoidal integrals.  The
// stationarity residual of J is
//   r(w) = lambda (a1 B1 - A1 b1) - (a2 B2 - A2 b2)
// normalized by sqrt(A2^2 + B2^2 + lambda^2 (A1^2 + B1^2)).
struct StationarityWorkspace {
    std::vector<double> offsets;
    std::vector<double> phase;
    std::vector<double> a1, b1, a2, b2;
    double A1 = 0.0, B1 = 0.0, A2 = 0.0, B2 = 0.0;
    double lambda = 0.0;
    std::vector<double> residual;  // normalized r(w)
    double max_residual = 0.0;
};

StationarityWorkspace stationarity_workspace(std::span<const double> phase_values,
                                             std::span<const double> offsets, double delta,
                                             double gamma_line, double lambda);

double stationarity_residual(const PhaseProfile& probe_phase, double delta, double gamma_line,
                             double lambda, const FrequencyGrid& grid);

// Default 4096-point grid spanning 5 bandwidths.
double stationarity_residual(const PhaseProfile& probe_phase, double delta, double gamma_line,
                             double lambda);

// Exact gradient of the discrete J = |P_r|^2 - k |P_nr|^2 with respect to the
// sampled probe phase values (three-pulse probe-only shaping).
std::vector<double> peak_objective_phase_gradient(const ProbeShapingEngine& engine,
                                                  std::span<const double> probe_phase, double k_weight);

}  // namespace cars
