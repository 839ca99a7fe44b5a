#pragma once

namespace cars {

// Modified Bessel function of the second kind, order zero.  Power series for
// small arguments and the optimally truncated asymptotic expansion for large
// ones, accumulated in extended precision; relative error stays near 1e-10
// at the regime boundary and is far smaller elsewhere.
double bessel_k0(double x);

// exp(x) * K0(x); finite for arbitrarily large x.
double bessel_k0_scaled(double x);

}  // namespace cars
