#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ensc/circuit.hpp"
#include "ensc/ensemble.hpp"
#include "ensc/linalg.hpp"

namespace ensc {

// One compiled block: where it sits on the register and its weighted
// ensemble (accepted or singleton fallback).
struct DistBlock {
  std::vector<int> qubit_map;  // local wire -> global wire
  WeightedEnsemble ens;
};

// Product distribution over block members. Sampling is independent across
// blocks; `original` is the uncompiled circuit used as the ideal reference.
struct CircuitDistribution {
  int width = 0;
  Circuit original;
  std::vector<DistBlock> blocks;

  int block_count() const { return int(blocks.size()); }
};

// Summary metrics for one compiled distribution.
struct ChannelReport {
  std::vector<double> block_wee;
  double wee_total = 0.0;
  double observable_err = 0.0;
  double max_trace_dist = 0.0;
  double v = 0.0;       // worst block
  double r = 0.0;       // worst block
  int64_t t_bound = 0;  // worst block, at the reporting delta
};

// Exact mixed-unitary channel: for each block in order,
// rho <- sum_i p_i U_i rho U_i^dag with U_i embedded on the register.
// Width capped at 8 (256 x 256 density matrices).
DensityMatrix apply_ensemble_channel(const CircuitDistribution& dist,
                                     const DensityMatrix& rho);

// One independent member draw per block, stitched into a flat circuit.
Circuit sample_circuit(const CircuitDistribution& dist, uint64_t seed);

// Average of t_samples sampled full-circuit conjugations of rho.
DensityMatrix empirical_channel(const CircuitDistribution& dist,
                                int64_t t_samples, const DensityMatrix& rho,
                                uint64_t seed);

// |<O>_ideal - <O>_ensemble| on the pure input psi0. Shot noise excluded.
double observable_error(const CircuitDistribution& dist, const CMat& obs,
                        const CVec& psi0);

// max over Haar-random pure inputs of (1/2)||E(rho) - U rho U^dag||_1.
// Trial t depends only on (seed, t), so growing `trials` keeps a fixed
// prefix of inputs.
double max_trace_distance(const CircuitDistribution& dist, int trials = 10,
                          uint64_t seed = 0);

// Choi-space concentration quantities of one block ensemble:
// v = ||sum_i p_i (J_i - J_U)^2||_op and r = max_i ||J_i - J_U||_op.
struct Lemma3Quantities {
  double v = 0.0;
  double r = 0.0;
  Eigen::Index d = 0;

  // Samples sufficient for the empirical channel to sit within eps^2/(2d^2)
  // of the exact one in operator norm with probability 1 - delta:
  // ceil((2v + (2/3) r a) / a^2 * ln(2 d^2 / delta)) with a = eps^2/(2d^2),
  // never less than 1.
  int64_t t_bound(double eps, double delta) const;
};

Lemma3Quantities lemma3_quantities(const WeightedEnsemble& ens);

struct ConvergenceRow {
  double eps = 0.0;
  int64_t t = 0;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool is_first = false;  // first grid T with mean <= eps^2 for this eps
};

// For each (eps, dist) entry and each T in t_grid: mean/min/max over
// `trials` repetitions of the worst-input trace distance between the
// empirical channel built from T samples and the ideal channel, over
// n_inputs fixed Haar pure inputs. Rows come back grouped by entry in grid
// order.
std::vector<ConvergenceRow> convergence_study(
    const std::vector<std::pair<double, CircuitDistribution>>& entries,
    const std::vector<int64_t>& t_grid, int trials, int n_inputs,
    uint64_t seed);

}  // namespace ensc
