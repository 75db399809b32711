#pragma once

#include <vector>

#include "ensc/circuit.hpp"
#include "ensc/linalg.hpp"

namespace ensc {

// One-qubit Clifford+T word approximating a target z rotation. Gates are in
// application order and drawn from {H, S, Sdg, T}.
struct CliffordTWord {
  std::vector<GateKind> gates;
  int t_count = 0;
  double error = 0.0;  // phase-aligned operator distance to the target
};

// Product of the listed gates as a 2x2 unitary (first gate applied first).
CMat word_unitary(const std::vector<GateKind>& gates);

// Distinct approximations of rz(theta) with error <= eps and T-count
// <= t_cap, sorted by (t_count, error) and truncated to max_results
// (<= 0 means no cap). Deterministic and memoized; safe to call from
// several threads.
std::vector<CliffordTWord> rz_to_clifford_t(double theta, double eps,
                                            int t_cap = 40,
                                            int max_results = 0);

// Minimum-error word within the T budget, whatever that error turns out to
// be. Used when a requested budget is too tight to be reachable.
CliffordTWord best_word(double theta, int t_cap = 40);

// Rewrites u3 gates as rz conjugated by Cliffords and turns rz angles that
// are multiples of pi/2 into Clifford words, leaving a Clifford+rz+cx
// circuit that matches the input up to global phase per gate.
Circuit expand_to_clifford_rz(const Circuit& c, double tol = 1e-9);

// Rough T-count needed to reach a target error with single-qubit synthesis.
int t_estimate(double eps);

}  // namespace ensc
