#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "cars/errors.hpp"
#include "cars/field.hpp"
#include "cars/grid.hpp"
#include "cars/units.hpp"
#include "test_common.hpp"

using namespace cars;
using namespace cars::testing;

TEST_CASE("frequency grid: layout and lookup") {
    const FrequencyGrid grid(0.0, 250.0, 2048);
    CHECK(grid.spacing() == doctest::Approx(500.0 / 2048).epsilon(1e-15));
    CHECK(grid.offset(grid.center_index()) == 0.0);
    CHECK(grid.min_offset() == doctest::Approx(-250.0));
    CHECK(grid.max_offset() == doctest::Approx(250.0 - grid.spacing()));

    // every interior point has its mirror on the grid
    for (int j = 1; j < grid.size(); j += 111) {
        const int m = grid.index_of(-grid.offset(j));
        REQUIRE(m >= 0);
        CHECK(grid.offset(m) == doctest::Approx(-grid.offset(j)).epsilon(1e-12));
    }
    CHECK(grid.index_of(grid.offset(17)) == 17);
    CHECK(grid.index_of(grid.offset(17) + 0.4 * grid.spacing()) == -1);

    CHECK(grid.covers(200.0));
    CHECK(!grid.covers(260.0));
}

TEST_CASE("frequency grid: odd size keeps the center sample") {
    const FrequencyGrid grid(0.0, 10.0, 5);
    CHECK(grid.offset(grid.center_index()) == 0.0);
    CHECK(grid.offset(0) == doctest::Approx(-grid.offset(4)));
}

TEST_CASE("frequency grid: constructor validation") {
    CHECK_THROWS_AS(FrequencyGrid(0.0, 250.0, 1), ConfigError);
    CHECK_THROWS_AS(FrequencyGrid(0.0, 0.0, 64), ConfigError);
    CHECK_THROWS_AS(FrequencyGrid(0.0, -1.0, 64), ConfigError);
}

TEST_CASE("spectral field: sampled values match the Gaussian model") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile{}};
    const FrequencyGrid grid(0.0, 250.0, 2048);
    const auto values = evaluate_field(field, grid);

    const int center = grid.center_index();
    CHECK(values[static_cast<std::size_t>(center)].real() ==
          doctest::Approx(1.0 / std::sqrt(50.0)).epsilon(1e-12));
    CHECK(values[static_cast<std::size_t>(center)].imag() == 0.0);

    // one bandwidth out: e^{-1} of the peak
    CHECK(std::abs(field(50.0)) == doctest::Approx(std::exp(-1.0) / std::sqrt(50.0)).epsilon(1e-12));

    // arctan mask: modulus unchanged, phase atan(1) = pi/4 at w = Gamma
    SpectralField shaped{1.0, 0.0, 50.0, PhaseProfile(ArctanPhase{4.8})};
    const std::complex<double> v = shaped(4.8);
    CHECK(std::abs(v) ==
          doctest::Approx(std::exp(-std::pow(4.8 / 50.0, 2)) / std::sqrt(50.0)).epsilon(1e-12));
    CHECK(std::arg(v) == doctest::Approx(kPi / 4).epsilon(1e-12));
}

TEST_CASE("spectral field: FWHM relations of the Gaussian") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile{}};
    const double peak = std::abs(field(0.0));

    // amplitude FWHM = 2 sqrt(ln 2) bandwidth
    const double w_amp = 50.0 * std::sqrt(std::log(2.0));
    CHECK(std::abs(field(w_amp)) == doctest::Approx(0.5 * peak).epsilon(1e-12));
    // intensity FWHM = sqrt(2 ln 2) bandwidth
    const double w_int = 50.0 * std::sqrt(0.5 * std::log(2.0));
    CHECK(std::norm(field(w_int)) == doctest::Approx(0.5 * peak * peak).epsilon(1e-12));
}

TEST_CASE("spectral field: narrow grid raises the truncation error") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile{}};
    const FrequencyGrid narrow(0.0, 150.0, 512);  // < 4 bandwidths
    CHECK_THROWS_AS(evaluate_field(field, narrow), NumericsError);
}

TEST_CASE("phase profiles: shape-specific values") {
    SUBCASE("linear with zero slope is identically zero") {
        PhaseProfile phase{LinearPhase{0.0}};
        for (double w : {-100.0, -3.2, 0.0, 57.0}) CHECK(phase(w) == 0.0);
    }
    SUBCASE("arctan asymptote") {
        PhaseProfile phase{ArctanPhase{4.8}};
        CHECK(phase(4.8) == doctest::Approx(kPi / 4).epsilon(1e-14));
        CHECK(phase(1e9) == doctest::Approx(kPi / 2).epsilon(1e-8));
        CHECK(phase(-1e9) == doctest::Approx(-kPi / 2).epsilon(1e-8));
    }
    SUBCASE("pi step about zero is right-continuous") {
        PhaseProfile phase{PiStepPhase{{0.0}, StepZeroSide::Left}};
        CHECK(phase(-1.0) == 0.0);
        CHECK(phase(-1e-12) == 0.0);
        CHECK(phase(0.0) == doctest::Approx(kPi));  // post-jump value at the step
        CHECK(phase(1.0) == doctest::Approx(kPi));
    }
    SUBCASE("pi step values are integer multiples of pi") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uniform(-200.0, 200.0);
        std::vector<double> positions{-120.0, -35.5, 0.25, 88.0};
        PhaseProfile phase{PiStepPhase{positions, StepZeroSide::Right}};
        for (int i = 0; i < 200; ++i) {
            const double v = phase(uniform(rng)) / kPi;
            CHECK(std::abs(v - std::round(v)) < 1e-12);
        }
    }
    SUBCASE("tabulated: exact at nodes, linear between, clamped outside") {
        PhaseProfile phase{TabulatedPhase{{-10.0, 0.0, 20.0}, {1.0, -2.0, 4.0}}};
        CHECK(phase(-10.0) == 1.0);
        CHECK(phase(0.0) == -2.0);
        CHECK(phase(20.0) == 4.0);
        CHECK(phase(-5.0) == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(phase(10.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(phase(-1000.0) == 1.0);
        CHECK(phase(1000.0) == 4.0);
    }
    SUBCASE("tabulated node validation") {
        CHECK_THROWS_AS(PhaseProfile(TabulatedPhase{{0.0, 0.0}, {1.0, 2.0}}), ConfigError);
        CHECK_THROWS_AS(PhaseProfile(TabulatedPhase{{1.0, 0.0}, {1.0, 2.0}}), ConfigError);
        CHECK_THROWS_AS(PhaseProfile(TabulatedPhase{{0.0}, {1.0, 2.0}}), ConfigError);
    }
    SUBCASE("modified arctan is continuous and odd through the branch offsets") {
        // denominator changes sign inside the sampled range
        PhaseProfile phase{ModifiedArctanPhase{4.8, 0.02}};
        double prev = phase(-400.0);
        for (double w = -399.9; w <= 400.0; w += 0.1) {
            const double v = phase(w);
            CHECK(std::abs(v - prev) < 0.2);  // no pi jumps
            prev = v;
        }
        for (double w : {0.5, 3.0, 12.7, 120.0}) CHECK(phase(-w) == doctest::Approx(-phase(w)).epsilon(1e-12));
        CHECK(phase(4000.0) > kPi / 2);  // tends to pi, beyond the plain arctan range
    }
}

TEST_CASE("phase profiles: gauge offset rotates the field uniformly") {
    std::mt19937_64 rng(5);
    const PhaseProfile base = random_tabulated_phase(rng, 200.0);
    const PhaseProfile shifted = base.with_offset(1.234);
    SpectralField f1{1.0, 0.0, 50.0, base};
    SpectralField f2{1.0, 0.0, 50.0, shifted};
    const FrequencyGrid grid(0.0, 250.0, 512);
    const auto a = evaluate_field(f1, grid);
    const auto b = evaluate_field(f2, grid);
    const std::complex<double> rot = std::polar(1.0, 1.234);
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(std::abs(a[j]) == doctest::Approx(std::abs(b[j])).epsilon(1e-14));
        CHECK(std::abs(b[j] - a[j] * rot) < 1e-14);
    }
}

TEST_CASE("time domain: transform-limited pulse peaks at t = 0 and is symmetric") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile{}};
    const FrequencyGrid grid(0.0, 250.0, 2048);
    const TimeEnvelope env = to_time_domain(field, grid);

    std::size_t peak = 0;
    for (std::size_t k = 1; k < env.values.size(); ++k)
        if (std::abs(env.values[k]) > std::abs(env.values[peak])) peak = k;
    CHECK(env.times_fs[peak] == 0.0);

    const int n = static_cast<int>(env.values.size());
    for (int k = 1; k < n; k += 97)
        CHECK(std::abs(env.values[static_cast<std::size_t>(k)]) ==
              doctest::Approx(std::abs(env.values[static_cast<std::size_t>(n - k)])).epsilon(1e-9));
}

TEST_CASE("time domain: Parseval with the 1/c convention constant") {
    SpectralField field{1.3, 0.0, 50.0, PhaseProfile(ArctanPhase{4.8})};
    const FrequencyGrid grid(0.0, 250.0, 2048);
    const auto spectrum = evaluate_field(field, grid);
    const TimeEnvelope env = to_time_domain(field, grid);

    double freq_power = 0.0;
    for (const auto& v : spectrum) freq_power += std::norm(v);
    freq_power *= grid.spacing();
    double time_power = 0.0;
    for (const auto& v : env.values) time_power += std::norm(v);
    time_power *= env.dt_fs;

    CHECK(time_power == doctest::Approx(freq_power / kSpeedOfLight).epsilon(1e-10));
}

TEST_CASE("time domain: linear phase displaces the envelope rigidly") {
    const FrequencyGrid grid(0.0, 250.0, 2048);
    SpectralField base{1.0, 0.0, 50.0, PhaseProfile{}};
    const TimeEnvelope ref = to_time_domain(base, grid);

    // a slope of 2 pi c tau displaces by exactly tau; pick tau = 8 time bins
    const double tau_fs = 8.0 * ref.dt_fs;
    SpectralField delayed{1.0, 0.0, 50.0, PhaseProfile(LinearPhase{kTwoPi * kSpeedOfLight * tau_fs})};
    const TimeEnvelope env = to_time_domain(delayed, grid);

    // with the exp(+i 2 pi c w t) convention the envelope moves to -tau
    const int n = static_cast<int>(env.values.size());
    for (int k = 8; k < n; k += 53)
        CHECK(std::abs(env.values[static_cast<std::size_t>(k - 8)]) ==
              doctest::Approx(std::abs(ref.values[static_cast<std::size_t>(k)])).epsilon(1e-9));

    std::size_t peak = 0;
    for (std::size_t k = 1; k < env.values.size(); ++k)
        if (std::abs(env.values[k]) > std::abs(env.values[peak])) peak = k;
    CHECK(std::abs(std::abs(env.times_fs[peak]) - tau_fs) <= ref.dt_fs / 2);
}

TEST_CASE("time domain: arctan mask skews the envelope; DFT matches the direct integral") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile(ArctanPhase{4.8})};
    const FrequencyGrid grid(0.0, 250.0, 2048);
    const TimeEnvelope env = to_time_domain(field, grid);

    // asymmetry: compare mirrored samples away from the peak
    const int n = static_cast<int>(env.values.size());
    double max_asym = 0.0;
    for (int k = n / 2 + 4; k < n / 2 + 300; ++k) {
        const double a = std::abs(env.values[static_cast<std::size_t>(k)]);
        const double b = std::abs(env.values[static_cast<std::size_t>(n - k)]);
        max_asym = std::max(max_asym, std::abs(a - b) / std::abs(env.values[static_cast<std::size_t>(n / 2)]));
    }
    CHECK(max_asym > 0.05);

    // FFT path equals the direct Fourier-integral oracle at the grid times
    for (int k = 200; k < n; k += 391) {
        const auto direct = fourier_integral_oracle(field, grid, env.times_fs[static_cast<std::size_t>(k)]);
        CHECK(std::abs(direct - env.values[static_cast<std::size_t>(k)]) < 1e-9);
    }
}

TEST_CASE("time domain: odd grid size is rejected") {
    SpectralField field{1.0, 0.0, 50.0, PhaseProfile{}};
    const FrequencyGrid grid(0.0, 250.0, 2047);
    CHECK_THROWS_AS(to_time_domain(field, grid), ConfigError);
}
