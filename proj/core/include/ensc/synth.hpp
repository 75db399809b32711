#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ensc/circuit.hpp"
#include "ensc/linalg.hpp"
#include "ensc/optimize.hpp"

namespace ensc {

// Parameterized skeleton: a cnot layout over `width` wires, a u3 on every
// wire up front and one on each output wire of every cnot.
struct AnsatzTemplate {
  int width = 0;
  std::vector<std::pair<int, int>> cnot_layout;

  Circuit skeleton() const;  // all u3 angles zero
  std::vector<ParamRef> param_refs() const;
};

struct SynthesisResult {
  Circuit circuit;
  CMat unitary;  // phase-aligned toward the target
  double e_i = 0.0;  // ||unitary - V||_F, recomputed after alignment
  int expensive_count = 0;
  double phase = 0.0;  // the absorbed global phase
};

// All cnot layouts of the given length, lexicographic over qubit pairs
// (i < j), deterministically subsampled to `cap` when the full set is
// larger. Exposed for tests.
std::vector<std::vector<std::pair<int, int>>> cnot_layouts(int width,
                                                           int count, int cap,
                                                           uint64_t seed);

// Fits the template's angles to V by multi-start quasi-Newton descent on
// f = ||U(x) - e^{i phi}V||_F^2 with the optimal phase. Empty when the
// final recomputed error exceeds eps.
std::optional<SynthesisResult> instantiate(const AnsatzTemplate& t,
                                           const CMat& v, double eps,
                                           uint64_t seed, int restarts = 8);

// Template search in nondecreasing cnot count, stopping at the original
// count. Results sorted by (expensive_count, error); every entry beats the
// original count or the list is empty.
std::vector<SynthesisResult> synthesize_block(const CMat& v,
                                              GateSetProfile profile,
                                              double eps,
                                              int original_expensive,
                                              uint64_t seed, int restarts = 8);

// Greedy Clifford snapping: walks rz angles from nearest-to-Clifford
// outward, snaps each to the closest multiple of pi/2 and reoptimizes the
// remaining free angles, keeping the snap only while the block error stays
// within eps. Never increases the non-Clifford count.
Circuit ntro_pass(const Circuit& c, const CMat& v, double eps);

// Per-gate rz budget: eps/n_z for the sampling workflow, eps^2/n_z for the
// one-shot reference compilation.
double ft_error_budget(int n_z, double eps, bool reference);

}  // namespace ensc
