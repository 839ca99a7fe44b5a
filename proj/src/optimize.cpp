#include "cars/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cars/errors.hpp"
#include "cars/schemes.hpp"
#include "cars/units.hpp"

namespace cars {

namespace {

using cdouble = std::complex<double>;

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

const char* kind_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::ResonantPeak: return "resonant_peak";
        case ObjectiveKind::LocalDifference: return "local_difference";
        case ObjectiveKind::Broadband: return "broadband";
    }
    return "?";
}

// Objective decodes free parameters into sampled phase values on the master
// grid; shared by the probe-only and joint evaluators.
std::vector<double> phase_values_on_grid(const PhaseProfile& phase, const FrequencyGrid& grid) {
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) values[static_cast<std::size_t>(j)] = phase(grid.offset(j));
    return values;
}

std::vector<PhaseProfile> analytic_probe_candidates(const CarsConfiguration& config,
                                                    const OptimizeOptions& opts) {
    const double gamma = config.medium.half_linewidth;
    const double bw = config.probe_field().bandwidth;
    std::vector<PhaseProfile> candidates;
    candidates.push_back(config.probe_field().phase);
    candidates.push_back(PhaseProfile(ZeroPhase{}));
    candidates.push_back(arctan_scheme(gamma));
    switch (opts.objective) {
        case ObjectiveKind::ResonantPeak:
            break;
        case ObjectiveKind::LocalDifference: {
            const double lambda = config.medium.lambda_from_weight(opts.k_weight);
            try {
                candidates.push_back(modified_arctan_scheme(lambda, bw, gamma));
            } catch (const NumericsError&) {
                // fixed point failed; CMA-ES proceeds without this candidate
            }
            candidates.push_back(pi_step_scheme({0.0}));
            break;
        }
        case ObjectiveKind::Broadband: {
            candidates.push_back(time_delay_scheme(1.0 / (kSpeedOfLight * bw)));
            candidates.push_back(time_delay_scheme(-1.0 / (kSpeedOfLight * bw)));
            candidates.push_back(multi_pi_step_ladder(8, bw / 2.0));
            break;
        }
    }
    return candidates;
}

OptimizationResult package(const CmaEsResult& raw, PhaseProfile probe_mask,
                           std::optional<PhaseProfile> pump_mask,
                           std::optional<PhaseProfile> stokes_mask, const std::string& fingerprint) {
    OptimizationResult result;
    result.probe_phase = std::move(probe_mask);
    result.pump_phase = std::move(pump_mask);
    result.stokes_phase = std::move(stokes_mask);
    result.best_value = -raw.best_value;
    result.evaluations = raw.evaluations;
    result.converged = raw.converged;
    result.history.reserve(raw.history.size());
    for (const auto& [e, v] : raw.history) result.history.emplace_back(e, -v);
    result.seed = raw.seed;
    result.fingerprint = fingerprint;
    return result;
}

}  // namespace

std::vector<double> PhaseParameterization::node_offsets(double bandwidth) const {
    if (n_nodes < 3) throw ConfigError("PhaseParameterization: need at least 3 nodes");
    if (n_nodes % 2 == 0) throw ConfigError("PhaseParameterization: n_nodes must be odd (center node)");
    const double span = span_factor * bandwidth;
    const double core = core_width > 0.0 ? core_width : span / (n_nodes - 1);
    const double u_max = std::asinh(span / core);
    std::vector<double> offsets(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) {
        const double u = -u_max + 2.0 * u_max * i / (n_nodes - 1);
        offsets[static_cast<std::size_t>(i)] = core * std::sinh(u);
    }
    offsets[static_cast<std::size_t>(n_nodes / 2)] = 0.0;
    return offsets;
}

PhaseProfile PhaseParameterization::decode(std::span<const double> free_values, double bandwidth) const {
    if (static_cast<int>(free_values.size()) != free_dims())
        throw ConfigError("PhaseParameterization: wrong number of free values");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_nodes));
    const int center = center_node();
    for (int i = 0; i < n_nodes; ++i) {
        if (i == center)
            values.push_back(0.0);
        else
            values.push_back(free_values[static_cast<std::size_t>(i < center ? i : i - 1)]);
    }
    return PhaseProfile(TabulatedPhase{node_offsets(bandwidth), std::move(values)});
}

std::vector<double> PhaseParameterization::encode(const PhaseProfile& phase, double bandwidth) const {
    const auto offsets = node_offsets(bandwidth);
    const int center = center_node();
    const double gauge = phase(offsets[static_cast<std::size_t>(center)]);
    std::vector<double> free_values;
    free_values.reserve(static_cast<std::size_t>(free_dims()));
    for (int i = 0; i < n_nodes; ++i) {
        if (i == center) continue;
        free_values.push_back(phase(offsets[static_cast<std::size_t>(i)]) - gauge);
    }
    return free_values;
}

PhaseParameterization resolve_parameterization(PhaseParameterization param, const MediumParams& medium) {
    if (param.core_width <= 0.0) param.core_width = 2.0 * medium.half_linewidth;
    return param;
}

std::string setup_fingerprint(const CarsConfiguration& config, const OptimizeOptions& opts) {
    std::ostringstream text;
    text.precision(17);
    text << (config.mode == CarsConfiguration::Mode::TwoPulse ? "two" : "three") << '|'
         << config.pump.bandwidth << ',' << config.pump.amplitude << '|' << config.stokes.bandwidth << ','
         << config.stokes.amplitude << '|' << config.probe_field().bandwidth << ','
         << config.probe_field().amplitude << '|' << config.medium.half_linewidth << ','
         << config.medium.resonant_constant << ',' << config.medium.nonresonant_chi << '|'
         << kind_name(opts.objective) << ',' << opts.k_weight << '|' << opts.parameterization.n_nodes
         << ',' << opts.parameterization.span_factor << '|' << opts.cma.population << ','
         << opts.cma.initial_sigma << ',' << opts.cma.max_evals << ',' << opts.cma.seed << ','
         << opts.cma.restarts << '|' << opts.engine.n_points << ',' << opts.engine.half_width_factor;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(text.str());
    return hex.str();
}

OptimizationResult optimize_probe_phase(const CarsConfiguration& config, const OptimizeOptions& opts) {
    if (config.mode != CarsConfiguration::Mode::ThreePulse)
        throw ConfigError("optimize_probe_phase: requires three-pulse mode");

    const ProbeShapingEngine engine(config, opts.engine);
    const FrequencyGrid& grid = engine.probe_grid();
    const PhaseParameterization param = resolve_parameterization(opts.parameterization, config.medium);
    const double bw = config.probe_field().bandwidth;

    const ObjectiveKind kind = opts.objective;
    const double k_weight = opts.k_weight;
    const ObjectiveFn objective = [&engine, &param, &grid, bw, kind, k_weight](
                                      std::span<const double> free_values) {
        const PhaseProfile mask = param.decode(free_values, bw);
        const auto phase = phase_values_on_grid(mask, grid);
        if (kind == ObjectiveKind::Broadband) {
            const auto bb = engine.broadband(phase);
            return -(bb.resonant - bb.nonresonant);
        }
        const auto peaks = engine.peaks(phase);
        const double pr2 = std::norm(peaks.resonant);
        if (kind == ObjectiveKind::ResonantPeak) return -pr2;
        return -(pr2 - k_weight * std::norm(peaks.nonresonant));
    };

    std::vector<std::vector<double>> injected;
    if (opts.inject_analytic) {
        for (const PhaseProfile& cand : analytic_probe_candidates(config, opts))
            injected.push_back(param.encode(cand, bw));
        if (kind == ObjectiveKind::Broadband) {
            // line-search the pure delay and seed the population with it
            double best_tau = 0.0, best_j = -std::numeric_limits<double>::infinity();
            for (int i = -60; i <= 60; ++i) {
                const double tau = 1.5 * i / (60.0 * kSpeedOfLight * bw);
                const auto phase = phase_values_on_grid(time_delay_scheme(tau), grid);
                const auto bb = engine.broadband(phase);
                const double j = bb.resonant - bb.nonresonant;
                if (j > best_j) {
                    best_j = j;
                    best_tau = tau;
                }
            }
            injected.push_back(param.encode(time_delay_scheme(best_tau), bw));
        }
    }

    const CmaEsResult raw = cma_es_minimize(objective, param.free_dims(), opts.cma, injected);
    return package(raw, param.decode(raw.best_point, bw), std::nullopt, std::nullopt,
                   setup_fingerprint(config, opts));
}

OptimizationResult optimize_all_pulses(const CarsConfiguration& config, const ShapeSelection& shape,
                                       const OptimizeOptions& opts) {
    const bool two_pulse = config.mode == CarsConfiguration::Mode::TwoPulse;
    const bool shape_pump = two_pulse ? true : shape.pump;
    const bool shape_stokes = shape.stokes;
    const bool shape_probe = two_pulse ? false : shape.probe;
    if (!shape_pump && !shape_stokes && !shape_probe)
        throw ConfigError("optimize_all_pulses: no pulse selected for shaping");

    if (!shape_pump && !shape_stokes && shape_probe) return optimize_probe_phase(config, opts);

    const FrequencyGrid grid = master_grid(config, opts.engine);
    const FrequencyGrid output = default_output_grid(config, opts.engine);
    const PhaseParameterization param = resolve_parameterization(opts.parameterization, config.medium);
    const int n = grid.size();

    // fixed amplitude profiles and fixed (unshaped) phases
    std::vector<double> amp_pump(static_cast<std::size_t>(n)), amp_stokes(static_cast<std::size_t>(n)),
        amp_probe(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double w = grid.offset(j);
        amp_pump[static_cast<std::size_t>(j)] = config.pump.envelope(w);
        amp_stokes[static_cast<std::size_t>(j)] = config.stokes.envelope(w);
        amp_probe[static_cast<std::size_t>(j)] = config.probe_field().envelope(w);
    }
    const auto fixed_pump = phase_values_on_grid(config.pump.phase, grid);
    const auto fixed_stokes = phase_values_on_grid(config.stokes.phase, grid);
    const auto fixed_probe = phase_values_on_grid(config.probe_field().phase, grid);

    const int block = param.free_dims();
    int dim = 0;
    if (shape_pump) dim += block;
    if (shape_stokes) dim += block;
    if (shape_probe) dim += block;

    const MediumParams medium = config.medium;
    const double spacing = grid.spacing();
    const ObjectiveKind kind = opts.objective;
    const double k_weight = opts.k_weight;

    const auto decode_block = [&](std::span<const double> x, int index, double bw) {
        return param.decode(x.subspan(static_cast<std::size_t>(index * block),
                                      static_cast<std::size_t>(block)),
                            bw);
    };

    const ObjectiveFn objective = [&, two_pulse, shape_pump, shape_stokes, shape_probe](
                                      std::span<const double> x) {
        int index = 0;
        std::vector<double> pump_phase = fixed_pump;
        std::vector<double> stokes_phase = fixed_stokes;
        std::vector<double> probe_phase = fixed_probe;
        if (shape_pump) {
            const PhaseProfile mask = decode_block(x, index++, config.pump.bandwidth);
            pump_phase = phase_values_on_grid(mask, grid);
        }
        if (shape_stokes) {
            const PhaseProfile mask = decode_block(x, index++, config.stokes.bandwidth);
            stokes_phase = phase_values_on_grid(mask, grid);
        }
        if (shape_probe) {
            const PhaseProfile mask = decode_block(x, index++, config.probe_field().bandwidth);
            probe_phase = phase_values_on_grid(mask, grid);
        }
        if (two_pulse) probe_phase = pump_phase;

        std::vector<cdouble> pump(static_cast<std::size_t>(n)), stokes(static_cast<std::size_t>(n)),
            probe(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            pump[ju] = std::polar(amp_pump[ju], pump_phase[ju]);
            stokes[ju] = std::polar(amp_stokes[ju], stokes_phase[ju]);
            probe[ju] = std::polar(amp_probe[ju], probe_phase[ju]);
        }
        const auto q = raman_excitation_sampled(pump, stokes, spacing);
        if (kind == ObjectiveKind::Broadband) {
            const auto bb = broadband_from_sampled(q, probe, grid, medium, output);
            return -(bb.resonant - bb.nonresonant);
        }
        const auto peaks = peaks_from_sampled(q, probe, grid, medium);
        const double pr2 = std::norm(peaks.resonant);
        if (kind == ObjectiveKind::ResonantPeak) return -pr2;
        return -(pr2 - k_weight * std::norm(peaks.nonresonant));
    };

    // injected candidates: current masks, all-flat, and the closed-form
    // shapes on the shaped pulses
    std::vector<std::vector<double>> injected;
    if (opts.inject_analytic) {
        const auto encode_all = [&](const PhaseProfile& pump_mask, const PhaseProfile& stokes_mask,
                                    const PhaseProfile& probe_mask) {
            std::vector<double> x;
            if (shape_pump) {
                auto v = param.encode(pump_mask, config.pump.bandwidth);
                x.insert(x.end(), v.begin(), v.end());
            }
            if (shape_stokes) {
                auto v = param.encode(stokes_mask, config.stokes.bandwidth);
                x.insert(x.end(), v.begin(), v.end());
            }
            if (shape_probe) {
                auto v = param.encode(probe_mask, config.probe_field().bandwidth);
                x.insert(x.end(), v.begin(), v.end());
            }
            return x;
        };
        const double gamma = medium.half_linewidth;
        const PhaseProfile zero{ZeroPhase{}};
        injected.push_back(encode_all(config.pump.phase, config.stokes.phase, config.probe_field().phase));
        injected.push_back(encode_all(zero, zero, zero));
        if (two_pulse) {
            injected.push_back(encode_all(two_pulse_composite_scheme(gamma, 0.0), zero, zero));
            injected.push_back(encode_all(PhaseProfile(ArctanPhase{gamma}), zero, zero));
        } else {
            injected.push_back(encode_all(zero, zero, arctan_scheme(gamma)));
        }
    }

    const CmaEsResult raw = cma_es_minimize(objective, dim, opts.cma, injected);

    int index = 0;
    std::optional<PhaseProfile> pump_mask, stokes_mask;
    PhaseProfile probe_mask{ZeroPhase{}};
    if (shape_pump) pump_mask = decode_block(raw.best_point, index++, config.pump.bandwidth);
    if (shape_stokes) stokes_mask = decode_block(raw.best_point, index++, config.stokes.bandwidth);
    if (shape_probe) probe_mask = decode_block(raw.best_point, index++, config.probe_field().bandwidth);
    if (two_pulse) probe_mask = *pump_mask;
    else if (!shape_probe) probe_mask = config.probe.phase;

    return package(raw, std::move(probe_mask), std::move(pump_mask), std::move(stokes_mask),
                   setup_fingerprint(config, opts));
}

std::vector<ParetoEntry> pareto_sweep(const CarsConfiguration& config, std::span<const double> k_values,
                                      const OptimizeOptions& opts) {
    if (config.mode != CarsConfiguration::Mode::ThreePulse)
        throw ConfigError("pareto_sweep: requires three-pulse mode");

    std::vector<ParetoEntry> entries;
    entries.reserve(k_values.size());

    const PhaseParameterization param = resolve_parameterization(opts.parameterization, config.medium);
    std::vector<double> warm_start;
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        OptimizeOptions point_opts = opts;
        point_opts.parameterization = param;
        point_opts.objective = ObjectiveKind::LocalDifference;
        point_opts.k_weight = k_values[i];
        point_opts.cma.seed = opts.cma.seed + i;
        if (!warm_start.empty()) point_opts.cma.initial_mean = warm_start;

        OptimizationResult result = optimize_probe_phase(config, point_opts);
        warm_start = param.encode(result.probe_phase, config.probe_field().bandwidth);

        const CarsConfiguration best_config = config.with_probe_phase(result.probe_phase);
        ParetoEntry entry{k_values[i], std::move(result),
                          pareto_point(best_config, k_values[i], opts.engine)};
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace cars
