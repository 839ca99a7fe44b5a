#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cars/medium.hpp"
#include "cars/optimize.hpp"

namespace cars {

// Scenario files are strict JSON: every physical key carries its unit in the
// name, unknown keys anywhere are rejected with the offending path, and a
// parsed scenario serializes back to an equivalent document.

struct PulseSpec {
    double carrier_cm1 = 0.0;
    double bandwidth_cm1 = 50.0;
    double amplitude = 1.0;
    nlohmann::json phase;  // scheme object; empty -> zero phase
};

struct Scenario {
    // medium
    MediumParams medium{0.0, 4.8, 1.0, 0.1};
    // pulses
    std::string mode = "three_pulse";  // or "two_pulse"
    PulseSpec pump, stokes, probe;
    // grid
    int grid_points = 2048;
    double half_width_factor = 5.0;
    double output_half_width_factor = 8.0;
    // objective
    std::string objective = "resonant_peak";  // local_difference | broadband
    double k_weight = 0.0;
    // optimizer
    int n_nodes = 33;
    double span_factor = 4.0;
    double core_width_cm1 = 0.0;  // 0 -> auto (twice the half-linewidth)
    int population = 0;
    double sigma0_rad = 0.5;
    long long max_evals = 20000;
    std::uint64_t seed = 1;
    int restarts = 0;
    double tol_fun = 1e-12;
    std::vector<std::string> shape_pulses{"probe"};
    // sweeps
    std::vector<double> pareto_k{0.0, 0.1, 1.0, 10.0, 100.0, 1000.0};
    std::vector<double> gamma_lambdas;  // empty -> derived from pareto_k
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Resolve a phase scheme object against the pulse/medium it applies to.
PhaseProfile resolve_phase(const nlohmann::json& phase, double bandwidth_cm1,
                           const MediumParams& medium, const std::string& where);

CarsConfiguration build_configuration(const Scenario& scenario);
EngineOptions engine_options(const Scenario& scenario);
OptimizeOptions optimize_options(const Scenario& scenario);
ShapeSelection shape_selection(const Scenario& scenario);
FrequencyGrid output_grid(const Scenario& scenario);

std::vector<double> gamma_lambda_values(const Scenario& scenario);

}  // namespace cars
