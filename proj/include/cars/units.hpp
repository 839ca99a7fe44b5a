#pragma once

#include <numbers>

namespace cars {

// All spectral quantities are wavenumbers (cm^-1), phases are radians and
// times are femtoseconds.  The only conversion constant needed is the speed
// of light in cm/fs.
inline constexpr double kSpeedOfLight = 2.99792458e-5;  // cm / fs

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A linear spectral phase slope tau (cm) corresponds to a pulse displacement
// of tau / (2 pi c) femtoseconds under the exp(+i 2 pi c w t) transform.
inline constexpr double slope_from_delay_fs(double delay_fs) {
    return kTwoPi * kSpeedOfLight * delay_fs;  // cm
}

inline constexpr double delay_fs_from_slope(double slope_cm) {
    return slope_cm / (kTwoPi * kSpeedOfLight);  // fs
}

}  // namespace cars
