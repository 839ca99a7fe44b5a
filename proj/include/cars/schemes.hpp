#pragma once

#include <span>
#include <vector>

#include "cars/phase.hpp"

namespace cars {

// Closed-form phase constructions and their reference values.

// Phi(w) = arctan(w / gamma_line): aligns every component of the resonant
// integrand, maximizing |P_r(0)|^2 for unshaped pump and Stokes.
PhaseProfile arctan_scheme(double gamma_line);

// Peak resonant intensity reached by the arctan scheme with equal pump,
// Stokes and probe bandwidths:
//   C^2 (pi / (2 delta)) e^{3 gamma^2 / (2 delta^2)} K0^2(3 gamma^2 / (4 delta^2)).
// Evaluated through the scaled Bessel function, so large gamma/delta ratios
// do not overflow.
double analytic_max_pr(double delta, double gamma_line, double resonant_constant = 1.0);

// Ladder mask stepping up by pi at each listed position (sorted ascending).
PhaseProfile pi_step_scheme(std::vector<double> positions);

// Symmetric ladder of n_steps pi-jumps around `center` with the given
// spacing; the broadband suppression mask.
PhaseProfile multi_pi_step_ladder(int n_steps, double spacing, double center = 0.0);

// Linear phase Phi(w) = 2 pi c tau_fs * w, a pure probe delay.
PhaseProfile time_delay_scheme(double tau_fs);

// Phi(w) = slope * w + arctan(w / gamma_line) / 2, the two-pulse optimum
// shape, tabulated densely around the arctan core and on geometric nodes in
// the linear tails.
PhaseProfile two_pulse_composite_scheme(double gamma_line, double slope, double span = 4000.0);

// gamma = B1 / A2 fixed point of the weighted-objective optimality
// condition: B1 and A2 are Gaussian-weighted quadratures evaluated at
// Phi(x) = atan2(x, gamma_line - lambda gamma (x^2 + gamma_line^2)).
struct GammaSolveOptions {
    double tol = 1e-12;
    int max_iter = 200;
    double damping = 0.5;    // gamma <- (1-b) gamma + b B1/A2
    int n_points = 8192;     // quadrature grid size
    double half_width_factor = 5.0;
};

struct GammaSolveResult {
    double gamma = 0.0;
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;  // final |gamma_{n+1} - gamma_n|
    bool converged = false;
};

GammaSolveResult solve_gamma(double lambda, double delta, double gamma_line,
                             const GammaSolveOptions& opts = {});

// Phi(w) = atan2(w, gamma_line - lambda gamma (w^2 + gamma_line^2)) with the
// converged gamma; throws NumericsError when the fixed point fails.
PhaseProfile modified_arctan_scheme(double lambda, double delta, double gamma_line,
                                    const GammaSolveOptions& opts = {});

// Stationary family of the peak resonant intensity: arctan(w/width) plus a
// pi jump wherever the selector toggles.  The all-zero selector is the
// maximum; toggling exactly at w = 0 gives the zero of |P_r|^2.
struct ExtremalFamilyMember {
    double width;
    std::vector<double> flip_positions;  // sorted; selector toggles 0<->1 here
    bool start_flipped = false;
    double constant = 0.0;

    double operator()(double w) const;
    std::vector<double> evaluate(std::span<const double> offsets) const;
};

}  // namespace cars
