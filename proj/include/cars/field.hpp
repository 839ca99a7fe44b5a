#pragma once

#include <complex>
#include <vector>

#include "cars/grid.hpp"
#include "cars/phase.hpp"

namespace cars {

// One shaped Gaussian pulse in the frequency domain,
//     E(w) = (amplitude / sqrt(bandwidth)) * exp(-w^2 / bandwidth^2) * exp(i Phi(w)),
// with w = w~ - carrier.  The amplitude FWHM of |E| is 2*sqrt(ln 2)*bandwidth
// and the intensity FWHM of |E|^2 is sqrt(2 ln 2)*bandwidth.
struct SpectralField {
    double amplitude = 1.0;
    double carrier = 0.0;    // cm^-1, absolute carrier Omega_k
    double bandwidth = 50.0; // cm^-1
    PhaseProfile phase{};

    // Real Gaussian envelope without the phase factor.
    double envelope(double w) const;
    // Full complex value at shifted offset w.
    std::complex<double> operator()(double w) const;
};

// Field value for quadrature sampling.  Identical to field(w) everywhere
// except exactly at a phase-jump offset, where the mean of the one-sided
// limits keeps trapezoid sums of piecewise-smooth integrands accurate (a pi
// jump sampled on its own grid point would otherwise leave an O(spacing)
// remainder in integrals that cancel exactly).
std::complex<double> quadrature_value(const SpectralField& field, double w);

// Samples the field on the grid.  Throws NumericsError when the grid spans
// less than 4 bandwidths on either side (truncation control).
std::vector<std::complex<double>> evaluate_field(const SpectralField& field, const FrequencyGrid& grid);

// Grid suited to every listed field: symmetric about zero offset with
// half_width = half_width_factor * max bandwidth.
FrequencyGrid default_grid(std::initializer_list<const SpectralField*> fields, int n_points = 2048,
                           double half_width_factor = 5.0);

struct TimeEnvelope {
    std::vector<double> times_fs;
    std::vector<std::complex<double>> values;
    double dt_fs = 0.0;
};

// Discrete approximation of env(t) = Integral E(w) exp(+i 2 pi c w t) dw on
// the conjugate time grid t_k = (k - n/2) / (n * spacing * c).  Under this
// convention sum |env|^2 dt = (1/c) sum |E|^2 dw.
TimeEnvelope to_time_domain(const SpectralField& field, const FrequencyGrid& grid);

}  // namespace cars
