#pragma once

#include "cars/errors.hpp"
#include "cars/field.hpp"

namespace cars {

// Single Lorentzian Raman line plus the flat nonresonant susceptibility.
struct MediumParams {
    double raman_shift = 0.0;      // Omega_R, cm^-1
    double half_linewidth = 4.8;   // Gamma, cm^-1
    double resonant_constant = 1.0;   // C
    double nonresonant_chi = 0.1;     // chi_nr

    void validate() const {
        if (!(half_linewidth > 0.0)) throw ConfigError("MediumParams: half_linewidth must be > 0");
        if (resonant_constant < 0.0 || nonresonant_chi < 0.0)
            throw ConfigError("MediumParams: C and chi_nr must be >= 0");
    }

    // lambda = k (chi_nr / C)^2, the weight entering the reduced objective.
    double lambda_from_weight(double k_weight) const {
        if (!(resonant_constant > 0.0)) throw ConfigError("MediumParams: C must be > 0 to derive lambda");
        const double r = nonresonant_chi / resonant_constant;
        return k_weight * r * r;
    }
};

// Pump/Stokes/probe configuration at the Raman resonance
// Omega_p - Omega_s = Omega_R.  In two-pulse mode the pump is reused as the
// probe, including its phase mask.
struct CarsConfiguration {
    enum class Mode { ThreePulse, TwoPulse };

    Mode mode = Mode::ThreePulse;
    SpectralField pump;
    SpectralField stokes;
    SpectralField probe;
    MediumParams medium;

    static CarsConfiguration three_pulse(SpectralField pump, SpectralField stokes, SpectralField probe,
                                         MediumParams medium) {
        medium.validate();
        return CarsConfiguration{Mode::ThreePulse, std::move(pump), std::move(stokes), std::move(probe),
                                 medium};
    }

    static CarsConfiguration two_pulse(SpectralField pump, SpectralField stokes, MediumParams medium) {
        medium.validate();
        CarsConfiguration cfg{Mode::TwoPulse, pump, std::move(stokes), std::move(pump), medium};
        return cfg;
    }

    // The field acting as probe (the pump itself in two-pulse mode).
    const SpectralField& probe_field() const { return mode == Mode::TwoPulse ? pump : probe; }

    CarsConfiguration with_probe_phase(PhaseProfile phase) const {
        CarsConfiguration cfg = *this;
        if (mode == Mode::TwoPulse) {
            cfg.pump.phase = phase;
            cfg.probe.phase = std::move(phase);
        } else {
            cfg.probe.phase = std::move(phase);
        }
        return cfg;
    }
};

}  // namespace cars
