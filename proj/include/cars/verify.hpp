#pragma once

#include <string>
#include <vector>

#include "cars/scenario.hpp"

namespace cars {

struct DiagnosticResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured quantity
    double threshold = 0.0;  // pass bound on value
    std::string note;
};

// Built-in diagnostic suite: gamma fixed point identity and convergence,
// analytic-vs-quadrature peak agreement, FFT-vs-direct spectrum equivalence,
// grid-refinement stability, and the stationarity residual of the scenario's
// probe mask.  The numeric diagnostics run on an equal-bandwidth arctan
// reference derived from the scenario; the stationarity check judges the
// scenario's own probe phase.
std::vector<DiagnosticResult> run_diagnostics(const Scenario& scenario);

bool all_passed(const std::vector<DiagnosticResult>& results);

}  // namespace cars
