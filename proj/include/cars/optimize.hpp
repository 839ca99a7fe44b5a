#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cars/cma_es.hpp"
#include "cars/objectives.hpp"
#include "cars/polarization.hpp"

namespace cars {

// Node-based phase mask: values at n_nodes offsets spanning
// +-span_factor * bandwidth, piecewise-linear in between.  The center node
// is pinned to zero, removing the constant-phase gauge while leaving linear
// slopes (physical delays) free.
//
// Node offsets follow a sinh warp, w_i = core_width * sinh(u_i) with u_i
// uniform: node density ~core_width/4 apart at the center and a few tens of
// cm^-1 apart in the Gaussian tails.  Uniform spacing at this node count
// cannot resolve the arctan bend at the Raman linewidth (~0.25 rad sampling
// error, costing ~2% of the peak objective); the warp brings the
// representation error below 1e-3 of the objective.
struct PhaseParameterization {
    int n_nodes = 33;
    double span_factor = 4.0;
    double core_width = 0.0;  // cm^-1; 0 -> set by the drivers to 2*Gamma

    std::vector<double> node_offsets(double bandwidth) const;
    int center_node() const { return n_nodes / 2; }
    int free_dims() const { return n_nodes - 1; }

    // free_values -> Tabulated mask with 0 inserted at the center node
    PhaseProfile decode(std::span<const double> free_values, double bandwidth) const;
    // mask -> free values, gauge-aligned so the center node reads zero
    std::vector<double> encode(const PhaseProfile& phase, double bandwidth) const;
};

// The parameterization the drivers actually use: an unset core_width
// resolves to twice the Raman half-linewidth.
PhaseParameterization resolve_parameterization(PhaseParameterization param, const MediumParams& medium);

enum class ObjectiveKind { ResonantPeak, LocalDifference, Broadband };

struct OptimizeOptions {
    ObjectiveKind objective = ObjectiveKind::ResonantPeak;
    double k_weight = 0.0;  // LocalDifference weight
    PhaseParameterization parameterization{};
    CmaEsConfig cma{};
    EngineOptions engine{};
    bool inject_analytic = true;  // seed the population with the closed-form schemes
};

struct OptimizationResult {
    PhaseProfile probe_phase;  // pump mask in two-pulse mode (probe == pump)
    std::optional<PhaseProfile> pump_phase;
    std::optional<PhaseProfile> stokes_phase;
    double best_value = 0.0;  // maximized objective
    long long evaluations = 0;
    bool converged = false;
    std::vector<std::pair<long long, double>> history;  // (eval, best maximized value)
    std::uint64_t seed = 0;
    std::string fingerprint;  // hash of the optimization setup
};

// Optimizes the probe mask with pump and Stokes untouched (three-pulse mode).
OptimizationResult optimize_probe_phase(const CarsConfiguration& config, const OptimizeOptions& opts);

// Jointly optimizes the masks selected in `shape`.  In two-pulse mode the
// single pump mask also acts as the probe mask.
struct ShapeSelection {
    bool pump = false;
    bool stokes = false;
    bool probe = true;
};

OptimizationResult optimize_all_pulses(const CarsConfiguration& config, const ShapeSelection& shape,
                                       const OptimizeOptions& opts);

struct ParetoEntry {
    double k_weight = 0.0;
    OptimizationResult result;
    ParetoPoint point;
};

// One probe optimization per weight, warm-starting each from the previous
// optimum.  Weights should be listed in ascending order.
std::vector<ParetoEntry> pareto_sweep(const CarsConfiguration& config, std::span<const double> k_values,
                                      const OptimizeOptions& opts);

// FNV-1a hash of the textual setup description; echoed into result files so
// outputs can be traced back to their configuration.
std::string setup_fingerprint(const CarsConfiguration& config, const OptimizeOptions& opts);

}  // namespace cars
