#pragma once

#include <span>
#include <variant>
#include <vector>

namespace cars {

// Spectral phase masks.  Every shape is evaluated in the shifted frequency
// variable w = w~ - Omega_k (cm^-1) and returns radians.

struct ZeroPhase {};

// Phi(w) = slope * w.  slope has units of cm; slope = 2*pi*c*delay_fs moves
// the pulse by delay_fs in the time domain.
struct LinearPhase {
    double slope = 0.0;
};

// Phi(w) = arctan(w / width), the probe mask that aligns the Lorentzian
// line factor 1/(w - i*width) into a common phase.
struct ArctanPhase {
    double width;
};

// Phi(w) = atan2(w, width - denom_coeff*(w^2 + width^2)).  The atan2 form is
// the continuous odd branch: where the denominator crosses zero the phase
// passes through +-pi/2 and tends to +-pi at large |w|.  denom_coeff is the
// lambda*gamma product of the weighted-objective optimum.
struct ModifiedArctanPhase {
    double width;
    double denom_coeff;
};

// Ladder of pi jumps: the phase increases by pi at each step position and is
// right-continuous (the step position itself takes the post-jump value).
// `zero_side` selects which asymptote sits at phase 0.
enum class StepZeroSide { Left, Right };

struct PiStepPhase {
    std::vector<double> positions;  // sorted ascending
    StepZeroSide zero_side = StepZeroSide::Left;
};

// Piecewise-linear interpolation through (node_offsets, node_values); values
// are held constant beyond the outermost nodes.
struct TabulatedPhase {
    std::vector<double> node_offsets;
    std::vector<double> node_values;
};

class PhaseProfile {
  public:
    using Shape =
        std::variant<ZeroPhase, LinearPhase, ArctanPhase, ModifiedArctanPhase, PiStepPhase, TabulatedPhase>;

    PhaseProfile() : shape_(ZeroPhase{}) {}
    PhaseProfile(Shape shape, double global_offset = 0.0);  // validates the shape

    double operator()(double w) const;
    std::vector<double> evaluate(std::span<const double> offsets) const;

    // Left-sided limit; differs from operator() only at pi-step positions,
    // where the profile is right-continuous.
    double left_limit(double w) const;

    // Step positions of a PiStep shape, nullptr for continuous shapes.
    const std::vector<double>* jump_positions() const;

    const Shape& shape() const { return shape_; }
    double global_offset() const { return global_offset_; }

    // Same shape with the constant offset shifted; |E(w)| and all derived
    // intensities are invariant under this.
    PhaseProfile with_offset(double delta) const { return PhaseProfile(shape_, global_offset_ + delta); }

  private:
    Shape shape_;
    double global_offset_ = 0.0;
};

}  // namespace cars
