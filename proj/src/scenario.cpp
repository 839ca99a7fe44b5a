#include "cars/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "cars/errors.hpp"
#include "cars/schemes.hpp"
#include "cars/units.hpp"

namespace cars {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    if (!obj.is_object()) throw ConfigError("scenario: " + (where.empty() ? "document" : where) + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.contains(key))
            throw ConfigError("scenario: unknown key \"" + (where.empty() ? key : where + "." + key) + "\"");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("scenario: bad value for \"" + where + "." + key + "\"");
    }
}

PulseSpec parse_pulse(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"carrier_cm1", "bandwidth_cm1", "amplitude", "phase"}, where);
    PulseSpec pulse;
    pulse.carrier_cm1 = get_or(obj, "carrier_cm1", pulse.carrier_cm1, where);
    pulse.bandwidth_cm1 = get_or(obj, "bandwidth_cm1", pulse.bandwidth_cm1, where);
    pulse.amplitude = get_or(obj, "amplitude", pulse.amplitude, where);
    if (obj.contains("phase")) pulse.phase = obj.at("phase");
    if (!(pulse.bandwidth_cm1 > 0.0))
        throw ConfigError("scenario: " + where + ".bandwidth_cm1 must be > 0");
    return pulse;
}

json pulse_to_json(const PulseSpec& pulse) {
    json obj;
    obj["carrier_cm1"] = pulse.carrier_cm1;
    obj["bandwidth_cm1"] = pulse.bandwidth_cm1;
    obj["amplitude"] = pulse.amplitude;
    if (!pulse.phase.is_null()) obj["phase"] = pulse.phase;
    return obj;
}

void validate_phase_spec(const json& phase, const std::string& where) {
    if (phase.is_null()) return;
    reject_unknown_keys(phase,
                        {"scheme", "slope_cm", "delay_fs", "gamma_cm1", "k_weight", "lambda",
                         "denom_coeff_cm", "step_positions_cm1", "zero_side", "n_steps", "spacing_cm1",
                         "center_cm1", "node_offsets_cm1", "node_values_rad", "offset_rad"},
                        where);
    if (!phase.contains("scheme")) throw ConfigError("scenario: " + where + ".scheme is required");
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    reject_unknown_keys(doc, {"medium", "pulses", "grid", "objective", "optimizer", "pareto", "gamma"},
                        "");
    Scenario s;

    if (doc.contains("medium")) {
        const json& m = doc.at("medium");
        reject_unknown_keys(
            m, {"raman_shift_cm1", "half_linewidth_cm1", "resonant_constant", "nonresonant_chi"},
            "medium");
        s.medium.raman_shift = get_or(m, "raman_shift_cm1", s.medium.raman_shift, "medium");
        s.medium.half_linewidth = get_or(m, "half_linewidth_cm1", s.medium.half_linewidth, "medium");
        s.medium.resonant_constant = get_or(m, "resonant_constant", s.medium.resonant_constant, "medium");
        s.medium.nonresonant_chi = get_or(m, "nonresonant_chi", s.medium.nonresonant_chi, "medium");
        s.medium.validate();
    }

    if (doc.contains("pulses")) {
        const json& p = doc.at("pulses");
        reject_unknown_keys(p, {"mode", "pump", "stokes", "probe"}, "pulses");
        s.mode = get_or<std::string>(p, "mode", s.mode, "pulses");
        if (s.mode != "three_pulse" && s.mode != "two_pulse")
            throw ConfigError("scenario: pulses.mode must be three_pulse or two_pulse");
        if (p.contains("pump")) s.pump = parse_pulse(p.at("pump"), "pulses.pump");
        if (p.contains("stokes")) s.stokes = parse_pulse(p.at("stokes"), "pulses.stokes");
        if (p.contains("probe")) {
            if (s.mode == "two_pulse")
                throw ConfigError("scenario: pulses.probe not allowed in two_pulse mode (probe == pump)");
            s.probe = parse_pulse(p.at("probe"), "pulses.probe");
        }
    }
    validate_phase_spec(s.pump.phase, "pulses.pump.phase");
    validate_phase_spec(s.stokes.phase, "pulses.stokes.phase");
    validate_phase_spec(s.probe.phase, "pulses.probe.phase");

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown_keys(g, {"n_points", "half_width_factor", "output_half_width_factor"}, "grid");
        s.grid_points = get_or(g, "n_points", s.grid_points, "grid");
        s.half_width_factor = get_or(g, "half_width_factor", s.half_width_factor, "grid");
        s.output_half_width_factor =
            get_or(g, "output_half_width_factor", s.output_half_width_factor, "grid");
        if (s.grid_points < 2 || s.grid_points % 2 != 0)
            throw ConfigError("scenario: grid.n_points must be even and >= 2");
        if (!(s.half_width_factor >= 4.0))
            throw ConfigError("scenario: grid.half_width_factor must be >= 4 (field truncation)");
    }

    if (doc.contains("objective")) {
        const json& o = doc.at("objective");
        reject_unknown_keys(o, {"kind", "k_weight"}, "objective");
        s.objective = get_or<std::string>(o, "kind", s.objective, "objective");
        s.k_weight = get_or(o, "k_weight", s.k_weight, "objective");
        if (s.objective != "resonant_peak" && s.objective != "local_difference" &&
            s.objective != "broadband")
            throw ConfigError(
                "scenario: objective.kind must be resonant_peak, local_difference or broadband");
        if (s.k_weight < 0.0) throw ConfigError("scenario: objective.k_weight must be >= 0");
    }

    if (doc.contains("optimizer")) {
        const json& o = doc.at("optimizer");
        reject_unknown_keys(o,
                            {"n_nodes", "span_factor", "core_width_cm1", "population", "sigma0_rad",
                             "max_evals", "seed", "restarts", "tol_fun", "shape_pulses"},
                            "optimizer");
        s.n_nodes = get_or(o, "n_nodes", s.n_nodes, "optimizer");
        s.span_factor = get_or(o, "span_factor", s.span_factor, "optimizer");
        s.core_width_cm1 = get_or(o, "core_width_cm1", s.core_width_cm1, "optimizer");
        s.population = get_or(o, "population", s.population, "optimizer");
        s.sigma0_rad = get_or(o, "sigma0_rad", s.sigma0_rad, "optimizer");
        s.max_evals = get_or(o, "max_evals", s.max_evals, "optimizer");
        s.seed = get_or(o, "seed", s.seed, "optimizer");
        s.restarts = get_or(o, "restarts", s.restarts, "optimizer");
        s.tol_fun = get_or(o, "tol_fun", s.tol_fun, "optimizer");
        s.shape_pulses = get_or(o, "shape_pulses", s.shape_pulses, "optimizer");
        for (const std::string& name : s.shape_pulses)
            if (name != "pump" && name != "stokes" && name != "probe")
                throw ConfigError("scenario: optimizer.shape_pulses entries must be pump/stokes/probe");
    }

    if (doc.contains("pareto")) {
        const json& p = doc.at("pareto");
        reject_unknown_keys(p, {"k_values"}, "pareto");
        s.pareto_k = get_or(p, "k_values", s.pareto_k, "pareto");
        for (double k : s.pareto_k)
            if (k < 0.0) throw ConfigError("scenario: pareto.k_values must be >= 0");
        if (!std::is_sorted(s.pareto_k.begin(), s.pareto_k.end()))
            throw ConfigError("scenario: pareto.k_values must be ascending");
    }

    if (doc.contains("gamma")) {
        const json& g = doc.at("gamma");
        reject_unknown_keys(g, {"lambda_values"}, "gamma");
        s.gamma_lambdas = get_or(g, "lambda_values", s.gamma_lambdas, "gamma");
        for (double v : s.gamma_lambdas)
            if (v < 0.0) throw ConfigError("scenario: gamma.lambda_values must be >= 0");
    }

    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("scenario: JSON parse failure in " + path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["medium"] = {{"raman_shift_cm1", s.medium.raman_shift},
                     {"half_linewidth_cm1", s.medium.half_linewidth},
                     {"resonant_constant", s.medium.resonant_constant},
                     {"nonresonant_chi", s.medium.nonresonant_chi}};
    json pulses;
    pulses["mode"] = s.mode;
    pulses["pump"] = pulse_to_json(s.pump);
    pulses["stokes"] = pulse_to_json(s.stokes);
    if (s.mode == "three_pulse") pulses["probe"] = pulse_to_json(s.probe);
    doc["pulses"] = std::move(pulses);
    doc["grid"] = {{"n_points", s.grid_points},
                   {"half_width_factor", s.half_width_factor},
                   {"output_half_width_factor", s.output_half_width_factor}};
    doc["objective"] = {{"kind", s.objective}, {"k_weight", s.k_weight}};
    doc["optimizer"] = {{"n_nodes", s.n_nodes},
                        {"span_factor", s.span_factor},
                        {"core_width_cm1", s.core_width_cm1},
                        {"population", s.population},
                        {"sigma0_rad", s.sigma0_rad},
                        {"max_evals", s.max_evals},
                        {"seed", s.seed},
                        {"restarts", s.restarts},
                        {"tol_fun", s.tol_fun},
                        {"shape_pulses", s.shape_pulses}};
    doc["pareto"] = {{"k_values", s.pareto_k}};
    if (!s.gamma_lambdas.empty()) doc["gamma"] = {{"lambda_values", s.gamma_lambdas}};
    return doc;
}

PhaseProfile resolve_phase(const json& phase, double bandwidth_cm1, const MediumParams& medium,
                           const std::string& where) {
    if (phase.is_null()) return PhaseProfile(ZeroPhase{});
    validate_phase_spec(phase, where);
    const std::string scheme = phase.at("scheme").get<std::string>();
    const double offset = get_or(phase, "offset_rad", 0.0, where);
    const double gamma_default = medium.half_linewidth;

    if (scheme == "zero") return PhaseProfile(ZeroPhase{}, offset);
    if (scheme == "linear") {
        const bool has_slope = phase.contains("slope_cm");
        const bool has_delay = phase.contains("delay_fs");
        if (has_slope == has_delay)
            throw ConfigError("scenario: " + where + " linear needs exactly one of slope_cm/delay_fs");
        const double slope = has_slope ? phase.at("slope_cm").get<double>()
                                       : slope_from_delay_fs(phase.at("delay_fs").get<double>());
        return PhaseProfile(LinearPhase{slope}, offset);
    }
    if (scheme == "arctan") {
        const double gamma = get_or(phase, "gamma_cm1", gamma_default, where);
        return PhaseProfile(ArctanPhase{gamma}, offset);
    }
    if (scheme == "modified_arctan") {
        const double gamma = get_or(phase, "gamma_cm1", gamma_default, where);
        if (phase.contains("denom_coeff_cm"))
            return PhaseProfile(ModifiedArctanPhase{gamma, phase.at("denom_coeff_cm").get<double>()},
                                offset);
        double lambda = 0.0;
        if (phase.contains("lambda"))
            lambda = phase.at("lambda").get<double>();
        else if (phase.contains("k_weight"))
            lambda = medium.lambda_from_weight(phase.at("k_weight").get<double>());
        else
            throw ConfigError("scenario: " + where +
                              " modified_arctan needs k_weight, lambda or denom_coeff_cm");
        PhaseProfile profile = modified_arctan_scheme(lambda, bandwidth_cm1, gamma);
        return PhaseProfile(profile.shape(), offset);
    }
    if (scheme == "pi_step") {
        std::vector<double> positions =
            get_or(phase, "step_positions_cm1", std::vector<double>{0.0}, where);
        if (!std::is_sorted(positions.begin(), positions.end()))
            throw ConfigError("scenario: " + where + ".step_positions_cm1 must be ascending");
        const std::string side = get_or<std::string>(phase, "zero_side", "left", where);
        if (side != "left" && side != "right")
            throw ConfigError("scenario: " + where + ".zero_side must be left or right");
        return PhaseProfile(
            PiStepPhase{std::move(positions), side == "left" ? StepZeroSide::Left : StepZeroSide::Right},
            offset);
    }
    if (scheme == "multi_pi_step") {
        const int n_steps = get_or(phase, "n_steps", 8, where);
        const double spacing = get_or(phase, "spacing_cm1", bandwidth_cm1 / 2.0, where);
        const double center = get_or(phase, "center_cm1", 0.0, where);
        PhaseProfile ladder = multi_pi_step_ladder(n_steps, spacing, center);
        return PhaseProfile(ladder.shape(), offset);
    }
    if (scheme == "tabulated") {
        if (!phase.contains("node_offsets_cm1") || !phase.contains("node_values_rad"))
            throw ConfigError("scenario: " + where + " tabulated needs node_offsets_cm1/node_values_rad");
        return PhaseProfile(TabulatedPhase{phase.at("node_offsets_cm1").get<std::vector<double>>(),
                                           phase.at("node_values_rad").get<std::vector<double>>()},
                            offset);
    }
    throw ConfigError("scenario: " + where + " unknown scheme \"" + scheme + "\"");
}

CarsConfiguration build_configuration(const Scenario& s) {
    const auto make_field = [&](const PulseSpec& pulse, const std::string& where) {
        SpectralField field;
        field.amplitude = pulse.amplitude;
        field.carrier = pulse.carrier_cm1;
        field.bandwidth = pulse.bandwidth_cm1;
        field.phase = resolve_phase(pulse.phase, pulse.bandwidth_cm1, s.medium, where);
        return field;
    };
    const SpectralField pump = make_field(s.pump, "pulses.pump.phase");
    const SpectralField stokes = make_field(s.stokes, "pulses.stokes.phase");
    if (s.mode == "two_pulse") return CarsConfiguration::two_pulse(pump, stokes, s.medium);
    return CarsConfiguration::three_pulse(pump, stokes, make_field(s.probe, "pulses.probe.phase"),
                                          s.medium);
}

EngineOptions engine_options(const Scenario& s) {
    EngineOptions opts;
    opts.n_points = s.grid_points;
    opts.half_width_factor = s.half_width_factor;
    return opts;
}

OptimizeOptions optimize_options(const Scenario& s) {
    OptimizeOptions opts;
    if (s.objective == "resonant_peak")
        opts.objective = ObjectiveKind::ResonantPeak;
    else if (s.objective == "local_difference")
        opts.objective = ObjectiveKind::LocalDifference;
    else
        opts.objective = ObjectiveKind::Broadband;
    opts.k_weight = s.k_weight;
    opts.parameterization.n_nodes = s.n_nodes;
    opts.parameterization.span_factor = s.span_factor;
    opts.parameterization.core_width = s.core_width_cm1;
    opts.cma.population = s.population;
    opts.cma.initial_sigma = s.sigma0_rad;
    opts.cma.max_evals = s.max_evals;
    opts.cma.seed = s.seed;
    opts.cma.restarts = s.restarts;
    opts.cma.tol_fun = s.tol_fun;
    opts.engine = engine_options(s);
    return opts;
}

ShapeSelection shape_selection(const Scenario& s) {
    ShapeSelection sel{false, false, false};
    for (const std::string& name : s.shape_pulses) {
        if (name == "pump") sel.pump = true;
        if (name == "stokes") sel.stokes = true;
        if (name == "probe") sel.probe = true;
    }
    return sel;
}

FrequencyGrid output_grid(const Scenario& s) {
    const CarsConfiguration config = build_configuration(s);
    return default_output_grid(config, engine_options(s), s.output_half_width_factor);
}

std::vector<double> gamma_lambda_values(const Scenario& s) {
    if (!s.gamma_lambdas.empty()) return s.gamma_lambdas;
    std::vector<double> lambdas;
    lambdas.reserve(s.pareto_k.size());
    for (double k : s.pareto_k) lambdas.push_back(s.medium.lambda_from_weight(k));
    return lambdas;
}

}  // namespace cars
