#include "cars/field.hpp"

#include <algorithm>
#include <cmath>

#include "cars/errors.hpp"
#include "cars/fft.hpp"
#include "cars/units.hpp"

namespace cars {

double SpectralField::envelope(double w) const {
    if (!(bandwidth > 0.0)) throw ConfigError("SpectralField: bandwidth must be > 0");
    const double u = w / bandwidth;
    return amplitude / std::sqrt(bandwidth) * std::exp(-u * u);
}

std::complex<double> SpectralField::operator()(double w) const {
    const double amp = envelope(w);
    const double phi = phase(w);
    return std::polar(amp, phi);
}

std::complex<double> quadrature_value(const SpectralField& field, double w) {
    const std::vector<double>* jumps = field.phase.jump_positions();
    if (jumps != nullptr && !jumps->empty()) {
        const auto it = std::lower_bound(jumps->begin(), jumps->end(), w - 1e-9 * (1.0 + std::abs(w)));
        if (it != jumps->end() && std::abs(*it - w) <= 1e-9 * (1.0 + std::abs(w))) {
            const double amp = field.envelope(w);
            const std::complex<double> right = std::polar(amp, field.phase(w));
            const std::complex<double> left = std::polar(amp, field.phase.left_limit(w));
            return 0.5 * (left + right);
        }
    }
    return field(w);
}

std::vector<std::complex<double>> evaluate_field(const SpectralField& field, const FrequencyGrid& grid) {
    if (!(field.bandwidth > 0.0)) throw ConfigError("SpectralField: bandwidth must be > 0");
    if (!grid.covers(4.0 * field.bandwidth))
        throw NumericsError("evaluate_field: grid narrower than 4 bandwidths, truncation too large");

    std::vector<std::complex<double>> out(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) out[static_cast<std::size_t>(j)] = quadrature_value(field, grid.offset(j));
    return out;
}

FrequencyGrid default_grid(std::initializer_list<const SpectralField*> fields, int n_points,
                           double half_width_factor) {
    double max_bw = 0.0;
    for (const SpectralField* f : fields) max_bw = std::max(max_bw, f->bandwidth);
    if (!(max_bw > 0.0)) throw ConfigError("default_grid: no positive bandwidth");
    return FrequencyGrid(0.0, half_width_factor * max_bw, n_points);
}

TimeEnvelope to_time_domain(const SpectralField& field, const FrequencyGrid& grid) {
    const int n = grid.size();
    if (n % 2 != 0) throw ConfigError("to_time_domain: grid size must be even");
    const double s = grid.spacing();
    const auto spectrum = evaluate_field(field, grid);

    // env(t_k) = s * sum_j E_j exp(+i 2 pi c w_j t_k) with w_j = (j - n/2) s
    // and t_k = (k - n/2) dt, dt = 1/(n s c).  The exponent splits into a
    // backward DFT plus (-1)^(j+k) and i^n twiddles.
    TimeEnvelope env;
    env.dt_fs = 1.0 / (static_cast<double>(n) * s * kSpeedOfLight);
    env.times_fs.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) env.times_fs[static_cast<std::size_t>(k)] = (k - n / 2) * env.dt_fs;

    std::vector<std::complex<double>> work(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        work[static_cast<std::size_t>(j)] = spectrum[static_cast<std::size_t>(j)] * sign;
    }
    fft::backward(work, work);

    // i^n rotation from the half-grid shifts
    const int quarter = ((n % 4) + 4) % 4;
    static constexpr std::complex<double> kQuarterTurns[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> rot = kQuarterTurns[quarter];

    env.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        env.values[static_cast<std::size_t>(k)] = work[static_cast<std::size_t>(k)] * (s * sign) * rot;
    }
    return env;
}

}  // namespace cars
