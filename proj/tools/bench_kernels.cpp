// Timing comparison of the spectrum kernels: serial direct quadrature,
// OpenMP direct quadrature, and the FFT convolution path.
#include <chrono>
#include <complex>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "cars/polarization.hpp"
#include "cars/schemes.hpp"

using namespace cars;

namespace {

CarsConfiguration make_config() {
    SpectralField pump{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField stokes{1.0, 0.0, 50.0, PhaseProfile{}};
    SpectralField probe{1.0, 0.0, 50.0, arctan_scheme(4.8)};
    return CarsConfiguration::three_pulse(pump, stokes, probe, MediumParams{0.0, 4.8, 1.0, 0.1});
}

template <typename F>
double time_ms(F&& fn, int repeats) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

}  // namespace

int main() {
    const CarsConfiguration config = make_config();
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-8s %-14s %-14s %-14s %-10s\n", "points", "direct-serial", "direct-omp", "fft",
                "max|diff|");

    for (int n : {256, 512, 1024, 2048, 4096}) {
        EngineOptions serial{n, 5.0, EvalPath::Direct, false};
        EngineOptions parallel{n, 5.0, EvalPath::Direct, true};
        EngineOptions fft{n, 5.0, EvalPath::Fft, true};
        const FrequencyGrid out = default_output_grid(config, serial, 6.0);
        const int repeats = n <= 1024 ? 5 : 2;

        PolarizationSpectrum ref, fast;
        const double t_serial = time_ms([&] { ref = full_spectrum(config, out, serial); }, repeats);
        const double t_omp = time_ms([&] { full_spectrum(config, out, parallel); }, repeats);
        const double t_fft = time_ms([&] { fast = full_spectrum(config, out, fft); }, repeats);

        double diff = 0.0;
        for (std::size_t i = 0; i < ref.resonant.size(); ++i) {
            diff = std::max(diff, std::abs(ref.resonant[i] - fast.resonant[i]));
            diff = std::max(diff, std::abs(ref.nonresonant[i] - fast.nonresonant[i]));
        }
        std::printf("%-8d %-14.3f %-14.3f %-14.3f %-10.2e\n", n, t_serial, t_omp, t_fft, diff);
    }
    return 0;
}
