#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ensc/synth.hpp"

namespace ensc {

// (theta, phi, lambda) plus the global phase alpha such that
// M = e^{i alpha} * u3(theta, phi, lambda), theta in [0, pi],
// phi and lambda in (-pi, pi].
struct U3Angles {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
};

// Reconstruction holds to 1e-12 for any 2x2 unitary.
U3Angles rewrite_su2_as_u3(const CMat& m);

// Perturbation directions for one block: coefficient triples (a,b,c) of
// P = aX + bY + cZ with ||(a,b,c)|| = eps_u3, closed under negation so the
// set's mean rotation cancels to first order.
struct PerturbationSpec {
  double eps_u3 = 0.0;
  std::vector<std::array<double, 3>> directions;
};

// count/2 uniform sphere directions (Gaussian normalize) scaled to eps_u3,
// each followed immediately by its exact negation. Odd counts round down.
PerturbationSpec make_perturbations(double eps_u3, int count, uint64_t seed);

// Spreads one synthesis result into `count` nearby members: splits the slack
// eps - e_i evenly over the u3 gates, multiplies every u3 by exp(iP) for one
// shared direction P per member, and rewrites each product as a plain u3.
// Members failing the recomputed ||U - V||_F <= eps check are dropped
// (`discarded` reports how many, when non-null). A circuit with no u3 gates
// comes back as [result].
std::vector<SynthesisResult> diversify_nisq(const SynthesisResult& result,
                                            const CMat& v, double eps,
                                            int count, uint64_t seed,
                                            int* discarded = nullptr);

// Lowers every rz in the result to Clifford+T words and spreads the block
// over word choices. Non-Clifford angles get the full word set at budget
// eps_rz plus offset queries at theta +- delta until the induced angle
// errors straddle the target; Clifford angles take their exact word. The
// first variant picks the minimum-T word everywhere, the rest are seeded
// random selections, up to variant_cap in total. Every output passes the
// block check ||U - V||_F <= eps. An empty return means some rz had no
// word within budget (or nothing survived the check): the block is not
// diversifiable at this budget and the caller should fall back.
std::vector<SynthesisResult> diversify_ft(const SynthesisResult& result,
                                          const CMat& v, double eps,
                                          double eps_rz, int t_cap,
                                          uint64_t seed, int variant_cap = 64);

}  // namespace ensc
