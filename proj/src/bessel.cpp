#include "cars/bessel.hpp"

#include <cmath>
#include <limits>

#include "cars/errors.hpp"

namespace cars {

namespace {

constexpr long double kEulerGamma = 0.5772156649015328606065120900824024L;
constexpr long double kPiL = 3.1415926535897932384626433832795029L;
constexpr double kSeriesLimit = 10.75;

// K0 = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k H_k / (k!)^2.
// Both pieces grow like e^x, so the subtraction loses ~2x/ln(10) digits;
// long double accumulation keeps >= 10 significant digits up to the
// series/asymptotic switch.
long double k0_series(long double x) {
    const long double q = x * x / 4.0L;
    long double term = 1.0L;    // (x^2/4)^k / (k!)^2
    long double i0 = 1.0L;
    long double h = 0.0L;       // harmonic number H_k
    long double hsum = 0.0L;    // sum term_k * H_k
    for (int k = 1; k < 600; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        i0 += term;
        h += 1.0L / k;
        hsum += term * h;
        if (term * (h + 1.0L) < 1e-25L * i0) break;
    }
    return -(std::log(x / 2.0L) + kEulerGamma) * i0 + hsum;
}

// K0(x) ~ sqrt(pi/(2x)) e^{-x} [1 + sum_k (-1)^k ((2k-1)!!)^2 / (k! (8x)^k)],
// truncated at the smallest term.  Returns e^x K0(x).
long double k0_asymptotic_scaled(long double x) {
    long double sum = 1.0L;
    long double term = 1.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 0; k < 200; ++k) {
        const long double odd = 2.0L * k + 1.0L;
        const long double next = -term * odd * odd / (8.0L * x * (k + 1.0L));
        if (std::abs(next) >= std::abs(prev)) break;  // series started diverging
        sum += next;
        prev = next;
        term = next;
        if (std::abs(next) < 1e-25L * std::abs(sum)) break;
    }
    return std::sqrt(kPiL / (2.0L * x)) * sum;
}

}  // namespace

double bessel_k0(double x) {
    if (!(x > 0.0)) throw NumericsError("bessel_k0: argument must be > 0");
    if (x <= kSeriesLimit) return static_cast<double>(k0_series(static_cast<long double>(x)));
    const long double scaled = k0_asymptotic_scaled(static_cast<long double>(x));
    return static_cast<double>(scaled * std::exp(-static_cast<long double>(x)));
}

double bessel_k0_scaled(double x) {
    if (!(x > 0.0)) throw NumericsError("bessel_k0_scaled: argument must be > 0");
    if (x <= kSeriesLimit)
        return static_cast<double>(k0_series(static_cast<long double>(x)) *
                                   std::exp(static_cast<long double>(x)));
    return static_cast<double>(k0_asymptotic_scaled(static_cast<long double>(x)));
}

}  // namespace cars
