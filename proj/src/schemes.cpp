#include "cars/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cars/bessel.hpp"
#include "cars/errors.hpp"
#include "cars/units.hpp"

namespace cars {

namespace {

// Gaussian weight of the probe-only reduction, W(x) = exp(-3x^2/(2 delta^2)).
double reduction_weight(double x, double delta) {
    return std::exp(-1.5 * x * x / (delta * delta));
}

struct GammaQuadratures {
    double b1;  // Int W cos(Phi)
    double a2;  // Int W sin(Phi + alpha) / sqrt(x^2 + G^2)
};

// With the continuous odd branch, sin(Phi) = x/R and cos(Phi) = D/R for
// D = G - lambda gamma (x^2 + G^2), R = sqrt(x^2 + D^2); the composed factor
// reduces to sin(Phi + alpha)/sqrt(x^2+G^2) = (x^2 + D G)/(R (x^2 + G^2)).
GammaQuadratures gamma_quadratures(double lambda_gamma, double delta, double gamma_line,
                                   const GammaSolveOptions& opts) {
    const int n = opts.n_points;
    const double half_width = opts.half_width_factor * delta;
    const double s = 2.0 * half_width / n;

    double b1 = 0.0, a2 = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double x = -half_width + j * s;
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        const double g = reduction_weight(x, delta) * w;
        const double d = gamma_line - lambda_gamma * (x * x + gamma_line * gamma_line);
        const double r = std::hypot(x, d);
        if (r == 0.0) continue;
        b1 += g * d / r;
        a2 += g * (x * x + d * gamma_line) / (r * (x * x + gamma_line * gamma_line));
    }
    return {b1 * s, a2 * s};
}

}  // namespace

PhaseProfile arctan_scheme(double gamma_line) { return PhaseProfile(ArctanPhase{gamma_line}); }

double analytic_max_pr(double delta, double gamma_line, double resonant_constant) {
    if (!(delta > 0.0) || !(gamma_line > 0.0))
        throw ConfigError("analytic_max_pr: delta and gamma must be > 0");
    const double x = 3.0 * gamma_line * gamma_line / (4.0 * delta * delta);
    const double scaled = bessel_k0_scaled(x);  // e^x K0(x)
    const double c = resonant_constant;
    return c * c * (kPi / (2.0 * delta)) * scaled * scaled;
}

PhaseProfile pi_step_scheme(std::vector<double> positions) {
    std::sort(positions.begin(), positions.end());
    return PhaseProfile(PiStepPhase{std::move(positions), StepZeroSide::Left});
}

PhaseProfile multi_pi_step_ladder(int n_steps, double spacing, double center) {
    if (n_steps < 1) throw ConfigError("multi_pi_step_ladder: n_steps must be >= 1");
    if (!(spacing > 0.0)) throw ConfigError("multi_pi_step_ladder: spacing must be > 0");
    std::vector<double> positions(static_cast<std::size_t>(n_steps));
    for (int i = 0; i < n_steps; ++i)
        positions[static_cast<std::size_t>(i)] = center + (i - 0.5 * (n_steps - 1)) * spacing;
    return pi_step_scheme(std::move(positions));
}

PhaseProfile time_delay_scheme(double tau_fs) {
    if (tau_fs == 0.0) return PhaseProfile(ZeroPhase{});
    return PhaseProfile(LinearPhase{slope_from_delay_fs(tau_fs)});
}

PhaseProfile two_pulse_composite_scheme(double gamma_line, double slope, double span) {
    if (!(gamma_line > 0.0)) throw ConfigError("two_pulse_composite_scheme: gamma must be > 0");
    if (!(span > 12.0 * gamma_line)) span = 12.0 * gamma_line * 1.5;

    // dense core where the arctan bends, geometric tails where the mask is
    // essentially linear
    std::vector<double> positive{0.0};
    const double core_step = gamma_line / 16.0;
    for (double x = core_step; x <= 12.0 * gamma_line; x += core_step) positive.push_back(x);
    for (double x = positive.back() * 1.25; x < span; x *= 1.25) positive.push_back(x);
    positive.push_back(span);

    std::vector<double> offsets;
    std::vector<double> values;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it)
        if (*it != 0.0) offsets.push_back(-*it);
    offsets.insert(offsets.end(), positive.begin(), positive.end());
    values.reserve(offsets.size());
    for (double x : offsets) values.push_back(slope * x + 0.5 * std::atan(x / gamma_line));
    return PhaseProfile(TabulatedPhase{std::move(offsets), std::move(values)});
}

GammaSolveResult solve_gamma(double lambda, double delta, double gamma_line,
                             const GammaSolveOptions& opts) {
    if (lambda < 0.0) throw ConfigError("solve_gamma: lambda must be >= 0");
    if (!(delta > 0.0) || !(gamma_line > 0.0)) throw ConfigError("solve_gamma: delta and gamma must be > 0");

    GammaSolveResult result;
    result.lambda = lambda;

    const auto map = [&](double gamma) {
        const GammaQuadratures q = gamma_quadratures(lambda * gamma, delta, gamma_line, opts);
        return q.b1 / q.a2;
    };

    // The physical branch continues from gamma(0) = Gamma and stays strictly
    // below the zero of B1 in the coefficient c = lambda*gamma: beyond that
    // zero the map produces negative values and, further out, a spurious
    // fixed point whose phase is a flat pi offset (a minimum of J).  Bracket
    // that zero to confine the iterates.
    double gamma_max = std::numeric_limits<double>::infinity();
    if (lambda > 0.0) {
        double c_lo = 0.0;
        double c_hi = gamma_line / (gamma_line * gamma_line + delta * delta / 16.0);
        for (int i = 0; i < 60 && gamma_quadratures(c_hi, delta, gamma_line, opts).b1 > 0.0; ++i) c_hi *= 2.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (c_lo + c_hi);
            (gamma_quadratures(mid, delta, gamma_line, opts).b1 > 0.0 ? c_lo : c_hi) = mid;
        }
        gamma_max = c_hi / lambda;
    }

    // Damped fixed-point iteration gamma <- (1-beta) gamma + beta B1/A2.
    // The map slope near the root steepens with lambda, so after the first
    // step beta is retuned from the secant slope estimate.
    double gamma = std::min(gamma_line, 0.5 * gamma_max);
    double beta = opts.damping;
    double prev_gamma = 0.0, prev_map = 0.0;
    bool have_prev = false;

    for (int it = 1; it <= opts.max_iter; ++it) {
        const double mapped = map(gamma);
        result.iterations = it;
        if (!std::isfinite(mapped)) {
            result.gamma = gamma;
            result.residual = std::numeric_limits<double>::infinity();
            return result;
        }
        if (have_prev && gamma != prev_gamma) {
            const double slope = (mapped - prev_map) / (gamma - prev_gamma);
            if (std::isfinite(slope) && slope < 1.0 - 1e-12)
                beta = std::clamp(1.0 / (1.0 - slope), 1e-6, 1.0);
        }
        prev_gamma = gamma;
        prev_map = mapped;
        have_prev = true;

        double next = gamma + beta * (mapped - gamma);
        if (next <= 0.0) next = 0.5 * gamma;
        if (next >= gamma_max) next = 0.5 * (gamma + gamma_max);
        result.residual = std::abs(next - gamma);
        gamma = next;
        if (result.residual < opts.tol) {
            result.converged = true;
            break;
        }
    }
    result.gamma = gamma;
    return result;
}

PhaseProfile modified_arctan_scheme(double lambda, double delta, double gamma_line,
                                    const GammaSolveOptions& opts) {
    const GammaSolveResult fit = solve_gamma(lambda, delta, gamma_line, opts);
    if (!fit.converged)
        throw NumericsError("modified_arctan_scheme: gamma fixed point did not converge (iterations=" +
                            std::to_string(fit.iterations) + ", residual=" + std::to_string(fit.residual) +
                            ")");
    return PhaseProfile(ModifiedArctanPhase{gamma_line, lambda * fit.gamma});
}

double ExtremalFamilyMember::operator()(double w) const {
    const auto up = std::upper_bound(flip_positions.begin(), flip_positions.end(), w);
    const bool flipped = (((up - flip_positions.begin()) % 2) == 1) != start_flipped;
    return std::atan(w / width) + (flipped ? kPi : 0.0) + constant;
}

std::vector<double> ExtremalFamilyMember::evaluate(std::span<const double> offsets) const {
    std::vector<double> out(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = (*this)(offsets[i]);
    return out;
}

}  // namespace cars
