#include "cars/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "cars/errors.hpp"
#include "cars/fft.hpp"

namespace cars {

namespace {

using cdouble = std::complex<double>;

// Lorentzian line factor C / (-Omega - i Gamma) at pump-Stokes detuning Omega.
cdouble line_factor(double detuning, const MediumParams& medium) {
    return medium.resonant_constant / cdouble(-detuning, -medium.half_linewidth);
}

FrequencyGrid detuning_grid_for(const FrequencyGrid& field_grid) {
    // 2N points at the field spacing, centered on zero detuning
    return FrequencyGrid(0.0, 2.0 * field_grid.half_width(), 2 * field_grid.size());
}

bool commensurate(const FrequencyGrid& coarse, const FrequencyGrid& fine) {
    if (!coarse.same_spacing(fine, 1e-9)) return false;
    // points of `coarse` must land on integer multiples of `fine` spacing
    const double ratio = coarse.offset(0) / fine.spacing();
    return std::abs(ratio - std::round(ratio)) < 1e-6;
}

std::vector<cdouble> sample(const SpectralField& field, const FrequencyGrid& grid) {
    return evaluate_field(field, grid);
}

// Q(Omega_k) by direct quadrature over the field grid; the Stokes factor is
// evaluated analytically at the shifted offsets, so any detuning grid works.
std::vector<cdouble> raman_excitation_direct(const SpectralField& pump, const SpectralField& stokes,
                                             const FrequencyGrid& field_grid,
                                             const FrequencyGrid& detuning_grid, bool parallel) {
    const auto pump_sampled = sample(pump, field_grid);
    const int n = field_grid.size();
    const int m = detuning_grid.size();
    const double s = field_grid.spacing();

    std::vector<cdouble> q(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 0; k < m; ++k) {
        const double detuning = detuning_grid.offset(k);
        cdouble acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            acc += pump_sampled[static_cast<std::size_t>(j)] *
                   std::conj(quadrature_value(stokes, field_grid.offset(j) - detuning));
        }
        q[static_cast<std::size_t>(k)] = acc * s;
    }
    return q;
}

// Q on the natural detuning grid (2N points, field spacing) via FFT
// correlation.  Lag u of the correlation sits at array index u + N - 1;
// detuning index k corresponds to u = k - N, so Q_k = s * corr[k - 1] and
// the k = 0 lag (no overlap) is zero.
std::vector<cdouble> raman_excitation_fft(std::span<const cdouble> pump_sampled,
                                          std::span<const cdouble> stokes_sampled, double spacing) {
    const std::size_t n = pump_sampled.size();
    const auto corr = fft::linear_correlation(pump_sampled, stokes_sampled);
    std::vector<cdouble> q(2 * n, cdouble(0.0, 0.0));
    for (std::size_t k = 1; k < 2 * n; ++k) q[k] = corr[k - 1] * spacing;
    return q;
}

struct Workspace {
    FrequencyGrid grid;           // master field grid
    FrequencyGrid detuning;       // 2N-point detuning grid
    double spacing;
    bool use_fft;
    std::vector<cdouble> probe_sampled;
    std::vector<cdouble> q;       // Q on the detuning grid
};

Workspace make_workspace(const CarsConfiguration& config, const EngineOptions& opts) {
    config.medium.validate();
    const FrequencyGrid grid = master_grid(config, opts);
    Workspace ws{grid, detuning_grid_for(grid), grid.spacing(), opts.path != EvalPath::Direct, {}, {}};

    const SpectralField& probe = config.probe_field();
    ws.probe_sampled = sample(probe, grid);

    if (ws.use_fft) {
        const auto pump_sampled = sample(config.pump, grid);
        const auto stokes_sampled = sample(config.stokes, grid);
        ws.q = raman_excitation_fft(pump_sampled, stokes_sampled, ws.spacing);
    } else {
        ws.q = raman_excitation_direct(config.pump, config.stokes, grid, ws.detuning, opts.parallel);
    }
    return ws;
}

// Q(-u) for a master-grid offset u_j: detuning index 3N/2 - j.
std::size_t mirrored_detuning_index(int j, int n) { return static_cast<std::size_t>(3 * n / 2 - j); }

struct PeakValues {
    cdouble resonant;
    cdouble nonresonant;
};

// P_r(0) = Int C/(u - i Gamma) Q(-u) E_pr(u) du and the matching
// nonresonant integral, as plain sums over the master grid.
PeakValues peak_values(const Workspace& ws, const CarsConfiguration& config) {
    const int n = ws.grid.size();
    const MediumParams& medium = config.medium;
    cdouble acc_r(0.0, 0.0), acc_nr(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const double u = ws.grid.offset(j);
        const cdouble q_m = ws.q[mirrored_detuning_index(j, n)];
        const cdouble probe = ws.probe_sampled[static_cast<std::size_t>(j)];
        const cdouble common = q_m * probe;
        acc_r += common / cdouble(u, -medium.half_linewidth);
        acc_nr += common;
    }
    return {acc_r * (ws.spacing * medium.resonant_constant),
            acc_nr * (ws.spacing * medium.nonresonant_chi)};
}

// One spectrum point by direct convolution quadrature at arbitrary w_as.
PeakValues spectrum_point_direct(const Workspace& ws, const CarsConfiguration& config, double w_as) {
    const int m = ws.detuning.size();
    const MediumParams& medium = config.medium;
    const SpectralField& probe = config.probe_field();
    cdouble acc_r(0.0, 0.0), acc_nr(0.0, 0.0);
    for (int k = 0; k < m; ++k) {
        const double detuning = ws.detuning.offset(k);
        const cdouble q_k = ws.q[static_cast<std::size_t>(k)];
        const cdouble probe_val = quadrature_value(probe, w_as - detuning);
        acc_r += line_factor(detuning, medium) * q_k * probe_val;
        acc_nr += q_k * probe_val;
    }
    return {acc_r * ws.spacing, acc_nr * (ws.spacing * medium.nonresonant_chi)};
}

struct NaturalSpectra {
    std::vector<cdouble> resonant;     // index t <-> w_as = (t - 3N/2) s
    std::vector<cdouble> nonresonant;
};

NaturalSpectra natural_spectra_fft(const Workspace& ws, const CarsConfiguration& config) {
    const int m = ws.detuning.size();
    const MediumParams& medium = config.medium;

    std::vector<cdouble> kernel_r(static_cast<std::size_t>(m));
    std::vector<cdouble> kernel_nr(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const cdouble q_k = ws.q[static_cast<std::size_t>(k)];
        kernel_r[static_cast<std::size_t>(k)] = line_factor(ws.detuning.offset(k), medium) * q_k;
        kernel_nr[static_cast<std::size_t>(k)] = medium.nonresonant_chi * q_k;
    }

    NaturalSpectra out;
    out.resonant = fft::linear_convolution(kernel_r, ws.probe_sampled);
    out.nonresonant = fft::linear_convolution(kernel_nr, ws.probe_sampled);
    for (auto& v : out.resonant) v *= ws.spacing;
    for (auto& v : out.nonresonant) v *= ws.spacing;
    return out;
}

}  // namespace

IntegratedIntensities integrated_intensities(const PolarizationSpectrum& spectrum) {
    const std::size_t n = spectrum.anti_stokes_offsets.size();
    if (n < 2) throw ConfigError("integrated_intensities: spectrum needs at least two points");
    const double s = spectrum.anti_stokes_offsets[1] - spectrum.anti_stokes_offsets[0];

    IntegratedIntensities out;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        const double r2 = std::norm(spectrum.resonant[i]);
        const double nr2 = std::norm(spectrum.nonresonant[i]);
        const double tot = std::norm(spectrum.resonant[i] + spectrum.nonresonant[i]);
        out.resonant += w * r2;
        out.nonresonant += w * nr2;
        out.total += w * tot;
    }
    out.resonant *= s;
    out.nonresonant *= s;
    out.total *= s;
    return out;
}

std::vector<std::complex<double>> raman_excitation(const SpectralField& pump, const SpectralField& stokes,
                                                   const FrequencyGrid& field_grid,
                                                   const FrequencyGrid& detuning_grid,
                                                   const EngineOptions& opts) {
    const bool can_fft = commensurate(detuning_grid, field_grid);
    if (opts.path == EvalPath::Fft && !can_fft)
        throw ConfigError("raman_excitation: detuning grid incompatible with field grid for FFT path");

    if (opts.path == EvalPath::Direct || !can_fft)
        return raman_excitation_direct(pump, stokes, field_grid, detuning_grid, opts.parallel);

    // FFT on the natural lags, then pick the requested detuning points.
    const auto pump_sampled = sample(pump, field_grid);
    const auto stokes_sampled = sample(stokes, field_grid);
    const auto q_natural = raman_excitation_fft(pump_sampled, stokes_sampled, field_grid.spacing());
    const int n = field_grid.size();

    std::vector<cdouble> out(static_cast<std::size_t>(detuning_grid.size()), cdouble(0.0, 0.0));
    for (int k = 0; k < detuning_grid.size(); ++k) {
        const double lag = detuning_grid.offset(k) / field_grid.spacing();
        const long long u = std::llround(lag);
        const long long idx = u + n;  // natural detuning index
        if (idx >= 0 && idx < 2 * n) out[static_cast<std::size_t>(k)] = q_natural[static_cast<std::size_t>(idx)];
    }
    return out;
}

std::vector<std::complex<double>> raman_excitation(const SpectralField& pump, const SpectralField& stokes,
                                                   const FrequencyGrid& detuning_grid,
                                                   const EngineOptions& opts) {
    FrequencyGrid field_grid = default_grid({&pump, &stokes}, opts.n_points, opts.half_width_factor);
    return raman_excitation(pump, stokes, field_grid, detuning_grid, opts);
}

FrequencyGrid master_grid(const CarsConfiguration& config, const EngineOptions& opts) {
    if (opts.n_points % 2 != 0) throw ConfigError("EngineOptions: n_points must be even");
    return default_grid({&config.pump, &config.stokes, &config.probe_field()}, opts.n_points,
                        opts.half_width_factor);
}

FrequencyGrid default_output_grid(const CarsConfiguration& config, const EngineOptions& opts,
                                  double half_width_over_bandwidth) {
    const FrequencyGrid grid = master_grid(config, opts);
    double max_bw = std::max({config.pump.bandwidth, config.stokes.bandwidth,
                              config.probe_field().bandwidth});
    // commensurate with the master spacing, comfortably inside the
    // computable +-3 half-width support
    const double target = std::min(half_width_over_bandwidth * max_bw,
                                   2.8 * grid.half_width());
    const int half_points = static_cast<int>(std::ceil(target / grid.spacing()));
    const int n_out = 2 * half_points;
    return FrequencyGrid(0.0, half_points * grid.spacing(), n_out);
}

std::vector<std::complex<double>> raman_excitation_sampled(std::span<const cdouble> pump,
                                                           std::span<const cdouble> stokes,
                                                           double spacing) {
    return raman_excitation_fft(pump, stokes, spacing);
}

PeakPairValues peaks_from_sampled(std::span<const cdouble> q, std::span<const cdouble> probe,
                                  const FrequencyGrid& field_grid, const MediumParams& medium) {
    const int n = field_grid.size();
    if (q.size() != static_cast<std::size_t>(2 * n) || probe.size() != static_cast<std::size_t>(n))
        throw ConfigError("peaks_from_sampled: array sizes do not match the grid");
    const double s = field_grid.spacing();
    cdouble acc_r(0.0, 0.0), acc_nr(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const double u = field_grid.offset(j);
        const cdouble common = q[mirrored_detuning_index(j, n)] * probe[static_cast<std::size_t>(j)];
        acc_r += common / cdouble(u, -medium.half_linewidth);
        acc_nr += common;
    }
    return {acc_r * (s * medium.resonant_constant), acc_nr * (s * medium.nonresonant_chi)};
}

BroadbandValues broadband_from_sampled(std::span<const cdouble> q, std::span<const cdouble> probe,
                                       const FrequencyGrid& field_grid, const MediumParams& medium,
                                       const FrequencyGrid& output_grid) {
    const int n = field_grid.size();
    const int m = 2 * n;
    if (q.size() != static_cast<std::size_t>(m) || probe.size() != static_cast<std::size_t>(n))
        throw ConfigError("broadband_from_sampled: array sizes do not match the grid");
    const double s = field_grid.spacing();
    const FrequencyGrid detuning = detuning_grid_for(field_grid);

    std::vector<cdouble> kernel_r(static_cast<std::size_t>(m)), kernel_nr(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        kernel_r[static_cast<std::size_t>(k)] = line_factor(detuning.offset(k), medium) * q[static_cast<std::size_t>(k)];
        kernel_nr[static_cast<std::size_t>(k)] = medium.nonresonant_chi * q[static_cast<std::size_t>(k)];
    }
    const auto p_r = fft::linear_convolution(kernel_r, probe);
    const auto p_nr = fft::linear_convolution(kernel_nr, probe);

    double i_r = 0.0, i_nr = 0.0;
    const int n_out = output_grid.size();
    for (int i = 0; i < n_out; ++i) {
        const double pos = output_grid.offset(i) / s + 3.0 * n / 2.0;
        const long long t = std::llround(pos);
        if (t < 0 || t >= static_cast<long long>(p_r.size()) ||
            std::abs(pos - static_cast<double>(t)) > 1e-6)
            throw ConfigError("broadband_from_sampled: output grid incommensurate with field grid");
        const double w = (i == 0 || i + 1 == n_out) ? 0.5 : 1.0;
        i_r += w * std::norm(p_r[static_cast<std::size_t>(t)] * s);
        i_nr += w * std::norm(p_nr[static_cast<std::size_t>(t)] * s);
    }
    const double s_out = output_grid.spacing();
    return {i_r * s_out, i_nr * s_out};
}

std::complex<double> resonant_peak(const CarsConfiguration& config, const EngineOptions& opts) {
    const Workspace ws = make_workspace(config, opts);
    return peak_values(ws, config).resonant;
}

std::complex<double> nonresonant_peak(const CarsConfiguration& config, const EngineOptions& opts) {
    const Workspace ws = make_workspace(config, opts);
    return peak_values(ws, config).nonresonant;
}

PolarizationSpectrum full_spectrum(const CarsConfiguration& config, const FrequencyGrid& output_grid,
                                   const EngineOptions& opts) {
    const Workspace ws = make_workspace(config, opts);
    const int n = ws.grid.size();
    const int n_out = output_grid.size();

    PolarizationSpectrum spec;
    spec.anti_stokes_offsets = output_grid.offsets();
    spec.resonant.assign(static_cast<std::size_t>(n_out), cdouble(0.0, 0.0));
    spec.nonresonant.assign(static_cast<std::size_t>(n_out), cdouble(0.0, 0.0));
    spec.cars_intensity.assign(static_cast<std::size_t>(n_out), 0.0);

    NaturalSpectra natural;
    if (ws.use_fft) natural = natural_spectra_fft(ws, config);
    const long long natural_len = ws.use_fft ? static_cast<long long>(natural.resonant.size()) : 0;

#pragma omp parallel for schedule(static) if (opts.parallel)
    for (int i = 0; i < n_out; ++i) {
        const double w_as = output_grid.offset(i);
        bool done = false;
        if (ws.use_fft) {
            const double pos = w_as / ws.spacing + 3.0 * n / 2.0;
            const long long t = std::llround(pos);
            if (std::abs(pos - static_cast<double>(t)) < 1e-6 && t >= 0 && t < natural_len) {
                spec.resonant[static_cast<std::size_t>(i)] = natural.resonant[static_cast<std::size_t>(t)];
                spec.nonresonant[static_cast<std::size_t>(i)] =
                    natural.nonresonant[static_cast<std::size_t>(t)];
                done = true;
            }
        }
        if (!done) {
            const PeakValues v = spectrum_point_direct(ws, config, w_as);
            spec.resonant[static_cast<std::size_t>(i)] = v.resonant;
            spec.nonresonant[static_cast<std::size_t>(i)] = v.nonresonant;
        }
        spec.cars_intensity[static_cast<std::size_t>(i)] =
            std::norm(spec.resonant[static_cast<std::size_t>(i)] + spec.nonresonant[static_cast<std::size_t>(i)]);
    }

    const IntegratedIntensities integrals = integrated_intensities(spec);
    spec.integrated_resonant = integrals.resonant;
    spec.integrated_nonresonant = integrals.nonresonant;
    spec.integrated_total = integrals.total;
    return spec;
}

ProbeShapingEngine::ProbeShapingEngine(const CarsConfiguration& config, const EngineOptions& opts)
    : grid_(master_grid(config, opts)), output_grid_(default_output_grid(config, opts)),
      spacing_(grid_.spacing()) {
    config.medium.validate();
    if (config.mode == CarsConfiguration::Mode::TwoPulse)
        throw ConfigError("ProbeShapingEngine: two-pulse mode shapes the pump; use the joint evaluator");
    const int n = grid_.size();
    const MediumParams& medium = config.medium;

    const auto pump_sampled = sample(config.pump, grid_);
    const auto stokes_sampled = sample(config.stokes, grid_);
    const auto q = raman_excitation_fft(pump_sampled, stokes_sampled, spacing_);

    const SpectralField& probe = config.probe_field();
    probe_envelope_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) probe_envelope_[static_cast<std::size_t>(j)] = probe.envelope(grid_.offset(j));

    peak_weight_r_.resize(static_cast<std::size_t>(n));
    peak_weight_nr_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double u = grid_.offset(j);
        const cdouble q_m = q[mirrored_detuning_index(j, n)];
        const cdouble base = q_m * probe_envelope_[static_cast<std::size_t>(j)] * spacing_;
        peak_weight_r_[static_cast<std::size_t>(j)] =
            base * (medium.resonant_constant / cdouble(u, -medium.half_linewidth));
        peak_weight_nr_[static_cast<std::size_t>(j)] = base * medium.nonresonant_chi;
    }

    // Convolution kernels for the broadband objective
    const int m = 2 * n;
    padded_size_ = fft::next_pow2(static_cast<std::size_t>(m + n - 1));
    std::vector<cdouble> kernel_r(padded_size_, cdouble(0.0, 0.0));
    std::vector<cdouble> kernel_nr(padded_size_, cdouble(0.0, 0.0));
    FrequencyGrid detuning = detuning_grid_for(grid_);
    for (int k = 0; k < m; ++k) {
        const cdouble q_k = q[static_cast<std::size_t>(k)];
        kernel_r[static_cast<std::size_t>(k)] = line_factor(detuning.offset(k), medium) * q_k;
        kernel_nr[static_cast<std::size_t>(k)] = medium.nonresonant_chi * q_k;
    }
    kernel_hat_r_.resize(padded_size_);
    kernel_hat_nr_.resize(padded_size_);
    fft::forward(kernel_r, kernel_hat_r_);
    fft::forward(kernel_nr, kernel_hat_nr_);

    natural_offset_ = 3 * n / 2;
    slice_begin_ = natural_offset_ - output_grid_.size() / 2;
    slice_end_ = slice_begin_ + output_grid_.size();
}

ProbeShapingEngine::PeakPair ProbeShapingEngine::peaks(std::span<const double> probe_phase) const {
    if (probe_phase.size() != peak_weight_r_.size())
        throw ConfigError("ProbeShapingEngine: phase array size mismatch");
    cdouble acc_r(0.0, 0.0), acc_nr(0.0, 0.0);
    for (std::size_t j = 0; j < probe_phase.size(); ++j) {
        const cdouble rot = std::polar(1.0, probe_phase[j]);
        acc_r += peak_weight_r_[j] * rot;
        acc_nr += peak_weight_nr_[j] * rot;
    }
    return {acc_r, acc_nr};
}

ProbeShapingEngine::BroadbandPair ProbeShapingEngine::broadband(std::span<const double> probe_phase) const {
    const std::size_t n = probe_envelope_.size();
    if (probe_phase.size() != n) throw ConfigError("ProbeShapingEngine: phase array size mismatch");

    std::vector<cdouble> probe(padded_size_, cdouble(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) probe[j] = std::polar(probe_envelope_[j], probe_phase[j]);
    fft::forward(probe, probe);

    std::vector<cdouble> prod_r(padded_size_), prod_nr(padded_size_);
    for (std::size_t i = 0; i < padded_size_; ++i) {
        prod_r[i] = probe[i] * kernel_hat_r_[i];
        prod_nr[i] = probe[i] * kernel_hat_nr_[i];
    }
    fft::backward(prod_r, prod_r);
    fft::backward(prod_nr, prod_nr);

    const double scale = spacing_ / static_cast<double>(padded_size_);
    double i_r = 0.0, i_nr = 0.0;
    for (int t = slice_begin_; t < slice_end_; ++t) {
        const double w = (t == slice_begin_ || t + 1 == slice_end_) ? 0.5 : 1.0;
        i_r += w * std::norm(prod_r[static_cast<std::size_t>(t)] * scale);
        i_nr += w * std::norm(prod_nr[static_cast<std::size_t>(t)] * scale);
    }
    return {i_r * spacing_, i_nr * spacing_};
}

}  // namespace cars
