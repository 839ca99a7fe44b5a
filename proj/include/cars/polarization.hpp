#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cars/grid.hpp"
#include "cars/medium.hpp"

namespace cars {

// The third-order polarizations reduce, through the anti-Stokes delta
// constraint, to a pump-Stokes cross-correlation followed by a single
// convolution.  With shifted variables w = w~ - Omega_k the carriers cancel
// and the Lorentzian denominator Omega_R - (w~_p - w~_s) - i Gamma becomes
// -(Omega) - i Gamma with Omega = w_p - w_s, so
//
//   Q(Omega)    = Int E_p(w) E_s*(w - Omega) dw
//   P_r(w_as)   = Int C / (-Omega - i Gamma) Q(Omega) E_pr(w_as - Omega) dOmega
//   P_nr(w_as)  = chi_nr Int Q(Omega) E_pr(w_as - Omega) dOmega
//
// At w_as = 0 the substitution u = -Omega recovers the probe-only form
// Int C/(u - i Gamma) Q(-u) E_pr(u) du.  The Fft path evaluates the sums by
// zero-padded FFT convolution; the Direct path performs the same quadrature
// term by term and is kept as the reference implementation.

enum class EvalPath { Auto, Direct, Fft };

struct EngineOptions {
    int n_points = 2048;             // master grid size (even)
    double half_width_factor = 5.0;  // master half-width over max bandwidth
    EvalPath path = EvalPath::Auto;
    bool parallel = true;  // OpenMP over output points on the Direct path
};

struct PolarizationSpectrum {
    std::vector<double> anti_stokes_offsets;        // w_as (cm^-1)
    std::vector<std::complex<double>> resonant;     // P_r
    std::vector<std::complex<double>> nonresonant;  // P_nr
    std::vector<double> cars_intensity;             // |P_r + P_nr|^2
    double integrated_resonant = 0.0;               // I_r  = Int |P_r|^2 dw_as
    double integrated_nonresonant = 0.0;            // I_nr = Int |P_nr|^2 dw_as
    double integrated_total = 0.0;                  // I    = Int |P_r + P_nr|^2 dw_as
};

struct IntegratedIntensities {
    double resonant = 0.0;
    double nonresonant = 0.0;
    double total = 0.0;
};

// Trapezoidal integrals of the stored spectra over their grid.
IntegratedIntensities integrated_intensities(const PolarizationSpectrum& spectrum);

// Pump-Stokes cross-correlation Q on detuning_grid.  The Fft path requires
// detuning_grid points to be integer multiples of field_grid spacing; with
// EvalPath::Fft a mismatch raises ConfigError, with Auto it falls back to the
// direct quadrature.
std::vector<std::complex<double>> raman_excitation(const SpectralField& pump, const SpectralField& stokes,
                                                   const FrequencyGrid& field_grid,
                                                   const FrequencyGrid& detuning_grid,
                                                   const EngineOptions& opts = {});

// Same with the field grid derived from the pulses per opts.
std::vector<std::complex<double>> raman_excitation(const SpectralField& pump, const SpectralField& stokes,
                                                   const FrequencyGrid& detuning_grid,
                                                   const EngineOptions& opts = {});

std::complex<double> resonant_peak(const CarsConfiguration& config, const EngineOptions& opts = {});
std::complex<double> nonresonant_peak(const CarsConfiguration& config, const EngineOptions& opts = {});

// Building blocks over pre-sampled fields on the master grid, used by the
// joint pump/Stokes/probe optimization where every mask changes per
// evaluation.  Q lives on the natural 2N-point detuning grid.
std::vector<std::complex<double>> raman_excitation_sampled(std::span<const std::complex<double>> pump,
                                                           std::span<const std::complex<double>> stokes,
                                                           double spacing);

struct PeakPairValues {
    std::complex<double> resonant;
    std::complex<double> nonresonant;
};

PeakPairValues peaks_from_sampled(std::span<const std::complex<double>> q,
                                  std::span<const std::complex<double>> probe,
                                  const FrequencyGrid& field_grid, const MediumParams& medium);

struct BroadbandValues {
    double resonant;     // I_r over the output window
    double nonresonant;  // I_nr
};

BroadbandValues broadband_from_sampled(std::span<const std::complex<double>> q,
                                       std::span<const std::complex<double>> probe,
                                       const FrequencyGrid& field_grid, const MediumParams& medium,
                                       const FrequencyGrid& output_grid);

PolarizationSpectrum full_spectrum(const CarsConfiguration& config, const FrequencyGrid& output_grid,
                                   const EngineOptions& opts = {});

// Output grid with the master spacing reaching +-half_width_over_bandwidth
// max bandwidths; the default reach of 8 bandwidths captures the whole
// spectrum in the integrated intensities.
FrequencyGrid default_output_grid(const CarsConfiguration& config, const EngineOptions& opts = {},
                                  double half_width_over_bandwidth = 8.0);

// Master sampling grid for the configuration per opts.
FrequencyGrid master_grid(const CarsConfiguration& config, const EngineOptions& opts = {});

// Precomputed pump/Stokes state for repeated probe-phase evaluations; the
// spine of the optimizer's probe-shaping objectives.  Phase values are given
// on probe_grid().
class ProbeShapingEngine {
  public:
    ProbeShapingEngine(const CarsConfiguration& config, const EngineOptions& opts = {});

    const FrequencyGrid& probe_grid() const { return grid_; }
    const FrequencyGrid& output_grid() const { return output_grid_; }

    struct PeakPair {
        std::complex<double> resonant;
        std::complex<double> nonresonant;
    };
    PeakPair peaks(std::span<const double> probe_phase) const;

    struct BroadbandPair {
        double resonant;     // I_r
        double nonresonant;  // I_nr
    };
    BroadbandPair broadband(std::span<const double> probe_phase) const;

    // P_r(0) = sum_j resonant_peak_weights()[j] exp(i phase_j), likewise for
    // the nonresonant peak; exposed for the variational gradient.
    const std::vector<std::complex<double>>& resonant_peak_weights() const { return peak_weight_r_; }
    const std::vector<std::complex<double>>& nonresonant_peak_weights() const { return peak_weight_nr_; }

  private:
    FrequencyGrid grid_;
    FrequencyGrid output_grid_;
    double spacing_;
    std::vector<double> probe_envelope_;                 // real Gaussian amplitudes
    std::vector<std::complex<double>> peak_weight_r_;    // s C L(u) Q(-u) A_pr(u)
    std::vector<std::complex<double>> peak_weight_nr_;   // s chi Q(-u) A_pr(u)
    std::size_t padded_size_ = 0;
    std::vector<std::complex<double>> kernel_hat_r_;     // FFT of C L(Omega) Q(Omega)
    std::vector<std::complex<double>> kernel_hat_nr_;    // FFT of chi Q(Omega)
    int natural_offset_ = 0;                             // natural grid index of w_as = 0
    int slice_begin_ = 0, slice_end_ = 0;                // output window in natural indices
};

}  // namespace cars
