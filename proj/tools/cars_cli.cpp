// Command-line front end: spectra, optimizations, Pareto sweeps, gamma
// tables and the self-check suite, all driven by a JSON scenario file.
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cars/errors.hpp"
#include "cars/objectives.hpp"
#include "cars/optimize.hpp"
#include "cars/output.hpp"
#include "cars/polarization.hpp"
#include "cars/scenario.hpp"
#include "cars/schemes.hpp"
#include "cars/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadScenario = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitNotConverged = 4;
constexpr int kExitVerifyFailed = 5;

struct CommonArgs {
    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int grid_points = 0;
    std::string k_list;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out) {
    cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")->required();
    auto* out = cmd->add_option("--out", args.out_path, "Output path (CSV or JSON)");
    if (needs_out) out->required();
    cmd->add_option("--seed", args.seed, "Override the scenario seed")->each([&args](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--grid-points", args.grid_points, "Override grid.n_points");
    cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

cars::Scenario load_with_overrides(const CommonArgs& args) {
    cars::Scenario scenario = cars::load_scenario(args.scenario_path);
    if (args.seed_set) scenario.seed = args.seed;
    if (args.grid_points > 0) {
        if (args.grid_points % 2 != 0) throw cars::ConfigError("--grid-points must be even");
        scenario.grid_points = args.grid_points;
    }
    return scenario;
}

nlohmann::json metrics_json(const cars::CarsConfiguration& config, const cars::EngineOptions& engine,
                            const cars::FrequencyGrid& out_grid) {
    const auto spectrum = cars::full_spectrum(config, out_grid, engine);
    const double pr2 = std::norm(cars::resonant_peak(config, engine));
    const double pnr2 = std::norm(cars::nonresonant_peak(config, engine));
    return nlohmann::json{{"peak_pr2", pr2},
                          {"peak_pnr2", pnr2},
                          {"i_r", spectrum.integrated_resonant},
                          {"i_nr", spectrum.integrated_nonresonant},
                          {"i_total", spectrum.integrated_total}};
}

int cmd_spectrum(const CommonArgs& args) {
    const cars::Scenario scenario = load_with_overrides(args);
    const cars::CarsConfiguration config = cars::build_configuration(scenario);
    const cars::EngineOptions engine = cars::engine_options(scenario);
    const cars::FrequencyGrid out_grid = cars::output_grid(scenario);

    const auto spectrum = cars::full_spectrum(config, out_grid, engine);
    cars::write_spectrum_csv(args.out_path, spectrum);

    nlohmann::json summary;
    summary["metrics"] = metrics_json(config, engine, out_grid);
    summary["scenario"] = cars::scenario_to_json(scenario);
    cars::write_json(cars::with_suffix(args.out_path, ".summary.json"), summary);

    if (!args.quiet)
        std::printf("spectrum: %zu rows, peak |P_r|^2 = %.6g, peak |P_nr|^2 = %.6g\n",
                    spectrum.anti_stokes_offsets.size(), summary["metrics"]["peak_pr2"].get<double>(),
                    summary["metrics"]["peak_pnr2"].get<double>());
    return kExitOk;
}

nlohmann::json result_json(const cars::OptimizationResult& result,
                           const cars::PhaseParameterization& param, double pump_bw, double stokes_bw,
                           double probe_bw) {
    nlohmann::json doc;
    doc["best_value"] = result.best_value;
    doc["evaluations"] = result.evaluations;
    doc["converged"] = result.converged;
    doc["seed"] = result.seed;
    doc["fingerprint"] = result.fingerprint;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [e, v] : result.history) trace.push_back({e, v});
    doc["trace"] = std::move(trace);
    nlohmann::json masks;
    masks["probe"] = cars::phase_to_json(result.probe_phase, param.node_offsets(probe_bw));
    if (result.pump_phase)
        masks["pump"] = cars::phase_to_json(*result.pump_phase, param.node_offsets(pump_bw));
    if (result.stokes_phase)
        masks["stokes"] = cars::phase_to_json(*result.stokes_phase, param.node_offsets(stokes_bw));
    doc["masks"] = std::move(masks);
    return doc;
}

int cmd_optimize(const CommonArgs& args) {
    const cars::Scenario scenario = load_with_overrides(args);
    const cars::CarsConfiguration config = cars::build_configuration(scenario);
    const cars::OptimizeOptions opts = cars::optimize_options(scenario);
    const cars::ShapeSelection shape = cars::shape_selection(scenario);
    const cars::PhaseParameterization param =
        cars::resolve_parameterization(opts.parameterization, config.medium);

    const bool probe_only = !shape.pump && !shape.stokes && shape.probe &&
                            config.mode == cars::CarsConfiguration::Mode::ThreePulse;
    const cars::OptimizationResult result =
        probe_only ? cars::optimize_probe_phase(config, opts)
                   : cars::optimize_all_pulses(config, shape, opts);

    nlohmann::json doc = result_json(result, param, config.pump.bandwidth, config.stokes.bandwidth,
                                     config.probe_field().bandwidth);
    doc["objective"] = scenario.objective;
    doc["k_weight"] = scenario.k_weight;

    // achieved metrics with the optimized masks in place
    cars::CarsConfiguration best = config;
    best.probe.phase = result.probe_phase;
    if (config.mode == cars::CarsConfiguration::Mode::TwoPulse) best.pump.phase = result.probe_phase;
    if (result.pump_phase) best.pump.phase = *result.pump_phase;
    if (result.stokes_phase) best.stokes.phase = *result.stokes_phase;
    doc["metrics"] = metrics_json(best, opts.engine, cars::output_grid(scenario));
    doc["scenario"] = cars::scenario_to_json(scenario);

    cars::write_json(args.out_path, doc);
    cars::atomic_write(cars::with_suffix(args.out_path, ".probe_phase.csv"),
                       cars::phase_table_csv(result.probe_phase,
                                             param.node_offsets(config.probe_field().bandwidth)));
    if (result.pump_phase)
        cars::atomic_write(cars::with_suffix(args.out_path, ".pump_phase.csv"),
                           cars::phase_table_csv(*result.pump_phase,
                                                 param.node_offsets(config.pump.bandwidth)));
    if (result.stokes_phase)
        cars::atomic_write(cars::with_suffix(args.out_path, ".stokes_phase.csv"),
                           cars::phase_table_csv(*result.stokes_phase,
                                                 param.node_offsets(config.stokes.bandwidth)));

    if (!args.quiet)
        std::printf("optimize: best %.8g after %lld evaluations (seed %llu)%s\n", result.best_value,
                    result.evaluations, static_cast<unsigned long long>(result.seed),
                    result.converged ? "" : " [not converged]");
    return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_pareto(const CommonArgs& args) {
    cars::Scenario scenario = load_with_overrides(args);
    if (!args.k_list.empty()) {
        std::vector<double> ks;
        std::string token;
        for (char c : args.k_list + ",") {
            if (c == ',') {
                if (!token.empty()) ks.push_back(std::stod(token));
                token.clear();
            } else {
                token += c;
            }
        }
        if (ks.empty()) throw cars::ConfigError("--k-list: no values parsed");
        scenario.pareto_k = std::move(ks);
    }
    const cars::CarsConfiguration config = cars::build_configuration(scenario);
    cars::OptimizeOptions opts = cars::optimize_options(scenario);
    const cars::PhaseParameterization param =
        cars::resolve_parameterization(opts.parameterization, config.medium);

    const auto entries = cars::pareto_sweep(config, scenario.pareto_k, opts);

    std::string csv = "k,pr2,pnr2,J\n";
    nlohmann::json rows = nlohmann::json::array();
    bool all_converged = true;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        char line[160];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", e.k_weight,
                      e.point.resonant_intensity, e.point.nonresonant_intensity, e.point.objective);
        csv += line;
        rows.push_back({{"k", e.k_weight},
                        {"pr2", e.point.resonant_intensity},
                        {"pnr2", e.point.nonresonant_intensity},
                        {"J", e.point.objective},
                        {"converged", e.result.converged},
                        {"evaluations", e.result.evaluations}});
        all_converged = all_converged && e.result.converged;
        cars::atomic_write(
            cars::with_suffix(args.out_path, ".k" + std::to_string(i) + ".phase.csv"),
            cars::phase_table_csv(e.result.probe_phase,
                                  param.node_offsets(config.probe_field().bandwidth)));
    }
    cars::atomic_write(args.out_path, csv);

    nlohmann::json summary;
    summary["points"] = std::move(rows);
    summary["seed"] = scenario.seed;
    summary["scenario"] = cars::scenario_to_json(scenario);
    cars::write_json(cars::with_suffix(args.out_path, ".summary.json"), summary);

    if (!args.quiet) std::printf("pareto: %zu points\n", entries.size());
    return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_gamma(const CommonArgs& args) {
    const cars::Scenario scenario = load_with_overrides(args);
    const double bw =
        scenario.mode == "two_pulse" ? scenario.pump.bandwidth_cm1 : scenario.probe.bandwidth_cm1;

    std::string csv = "lambda,gamma,iterations,residual,converged\n";
    bool all_converged = true;
    for (double lambda : cars::gamma_lambda_values(scenario)) {
        cars::GammaSolveOptions gopts;
        gopts.tol = 1e-10;
        const auto r = cars::solve_gamma(lambda, bw, scenario.medium.half_linewidth, gopts);
        char line[160];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%d\n", r.lambda, r.gamma, r.iterations,
                      r.residual, r.converged ? 1 : 0);
        csv += line;
        all_converged = all_converged && r.converged;
    }
    if (args.out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        cars::atomic_write(args.out_path, csv);
        if (!args.quiet) std::printf("gamma: table written to %s\n", args.out_path.c_str());
    }
    return all_converged ? kExitOk : kExitNumerics;
}

int cmd_verify(const CommonArgs& args) {
    const cars::Scenario scenario = load_with_overrides(args);
    const auto results = cars::run_diagnostics(scenario);

    std::printf("%-28s %-6s %-13s %-13s %s\n", "diagnostic", "status", "value", "threshold", "note");
    for (const auto& d : results)
        std::printf("%-28s %-6s %-13.4e %-13.4e %s\n", d.name.c_str(), d.passed ? "PASS" : "FAIL",
                    d.value, d.threshold, d.note.c_str());

    if (!args.out_path.empty()) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& d : results)
            doc.push_back({{"name", d.name},
                           {"passed", d.passed},
                           {"value", d.value},
                           {"threshold", d.threshold},
                           {"note", d.note}});
        cars::write_json(args.out_path, doc);
    }
    return cars::all_passed(results) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-domain CARS pulse-shaping toolkit"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, optimize_args, pareto_args, gamma_args, verify_args;
    auto* spectrum = app.add_subcommand("spectrum", "Write the CARS spectrum for a scenario");
    add_common(spectrum, spectrum_args, true);
    auto* optimize = app.add_subcommand("optimize", "Optimize phase masks for the scenario objective");
    add_common(optimize, optimize_args, true);
    auto* pareto = app.add_subcommand("pareto", "Sweep the signal/background weight");
    add_common(pareto, pareto_args, true);
    pareto->add_option("--k-list", pareto_args.k_list, "Comma-separated weights (overrides scenario)");
    auto* gamma = app.add_subcommand("gamma", "Tabulate the gamma fixed point over lambda");
    add_common(gamma, gamma_args, false);
    auto* verify = app.add_subcommand("verify", "Run the built-in diagnostic suite");
    add_common(verify, verify_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return cmd_spectrum(spectrum_args);
        if (optimize->parsed()) return cmd_optimize(optimize_args);
        if (pareto->parsed()) return cmd_pareto(pareto_args);
        if (gamma->parsed()) return cmd_gamma(gamma_args);
        if (verify->parsed()) return cmd_verify(verify_args);
    } catch (const cars::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadScenario;
    } catch (const cars::NumericsError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerics;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerics;
    }
    return kExitOk;
}
