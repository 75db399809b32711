#include "ensc/channel.hpp"

#include <algorithm>
#include <cmath>

#include "ensc/errors.hpp"
#include "ensc/optimize.hpp"
#include "ensc/rng.hpp"

namespace ensc {

namespace {

constexpr int kMaxChannelWidth = 8;

void check_width(const CircuitDistribution& dist) {
  if (dist.width < 1) throw InputError("channel: empty distribution");
  if (dist.width > kMaxChannelWidth)
    throw CapacityError("channel: exact evaluation capped at 8 qubits");
}

// rho <- G rho G^dag for every gate of c.
void conjugate_by_circuit(CMat& rho, const Circuit& c) {
  for (const auto& g : c.gates) {
    CMat gm = gate_matrix(g);
    apply_local_unitary(rho, gm, g.qubits, c.width);
    apply_local_unitary_right(rho, gm.adjoint(), g.qubits, c.width);
  }
}

CVec ideal_state(const CircuitDistribution& dist, const CVec& psi0) {
  CMat s = psi0;
  for (const auto& g : dist.original.gates)
    apply_gate(s, g, dist.width);
  return s.col(0);
}

}  // namespace

DensityMatrix apply_ensemble_channel(const CircuitDistribution& dist,
                                     const DensityMatrix& rho) {
  check_width(dist);
  const Eigen::Index d = Eigen::Index(1) << dist.width;
  if (rho.dim() != d)
    throw InputError("apply_ensemble_channel: state dimension mismatch");

  CMat cur = rho.mat();
  for (const auto& blk : dist.blocks) {
    CMat next = CMat::Zero(d, d);
    for (const auto& mem : blk.ens.members) {
      if (mem.weight <= 0.0) continue;
      CMat term = cur;
      apply_local_unitary(term, mem.unitary, blk.qubit_map, dist.width);
      apply_local_unitary_right(term, mem.unitary.adjoint(), blk.qubit_map,
                                dist.width);
      next += mem.weight * term;
    }
    cur = std::move(next);
  }
  return DensityMatrix(std::move(cur));
}

Circuit sample_circuit(const CircuitDistribution& dist, uint64_t seed) {
  Circuit out;
  out.width = dist.width;
  auto rng = make_rng(derive_seed(seed, 0x5a3));
  for (const auto& blk : dist.blocks) {
    const auto& members = blk.ens.members;
    if (members.empty()) throw InputError("sample_circuit: empty block");
    double u = uniform01(rng);
    size_t pick = members.size() - 1;
    double cum = 0.0;
    for (size_t i = 0; i < members.size(); ++i) {
      cum += members[i].weight;
      if (u < cum) {
        pick = i;
        break;
      }
    }
    for (const auto& g : members[pick].circuit.gates) {
      Gate mapped = g;
      for (auto& q : mapped.qubits) q = blk.qubit_map[size_t(q)];
      out.add(std::move(mapped));
    }
  }
  return out;
}

DensityMatrix empirical_channel(const CircuitDistribution& dist,
                                int64_t t_samples, const DensityMatrix& rho,
                                uint64_t seed) {
  check_width(dist);
  if (t_samples < 1) throw InputError("empirical_channel: need T >= 1");
  const Eigen::Index d = Eigen::Index(1) << dist.width;
  if (rho.dim() != d)
    throw InputError("empirical_channel: state dimension mismatch");

  CMat acc = CMat::Zero(d, d);
  for (int64_t t = 0; t < t_samples; ++t) {
    Circuit c = sample_circuit(dist, derive_seed(seed, uint64_t(t)));
    CMat term = rho.mat();
    conjugate_by_circuit(term, c);
    acc += term;
  }
  acc /= double(t_samples);
  return DensityMatrix(std::move(acc));
}

double observable_error(const CircuitDistribution& dist, const CMat& obs,
                        const CVec& psi0) {
  check_width(dist);
  const Eigen::Index d = Eigen::Index(1) << dist.width;
  if (obs.rows() != d || obs.cols() != d || psi0.size() != d)
    throw InputError("observable_error: dimension mismatch");
  if ((obs - obs.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw InputError("observable_error: observable is not Hermitian");

  CVec out = ideal_state(dist, psi0);
  double ideal = (out.adjoint() * obs * out)(0, 0).real();

  DensityMatrix rho0(psi0 * psi0.adjoint());
  DensityMatrix rho = apply_ensemble_channel(dist, rho0);
  double ens = (obs * rho.mat()).trace().real();
  return std::abs(ideal - ens);
}

double max_trace_distance(const CircuitDistribution& dist, int trials,
                          uint64_t seed) {
  check_width(dist);
  if (trials < 1) throw InputError("max_trace_distance: need trials >= 1");
  const Eigen::Index d = Eigen::Index(1) << dist.width;

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto rng = make_rng(derive_seed(seed, 0x317d, uint64_t(t)));
    CVec psi = haar_state(d, rng);
    CVec out = ideal_state(dist, psi);
    CMat rho_ideal = out * out.adjoint();
    DensityMatrix rho_ens =
        apply_ensemble_channel(dist, DensityMatrix(psi * psi.adjoint()));
    worst = std::max(worst, 0.5 * trace_norm(rho_ens.mat() - rho_ideal));
  }
  return worst;
}

int64_t Lemma3Quantities::t_bound(double eps, double delta) const {
  if (eps <= 0 || delta <= 0 || delta >= 1)
    throw InputError("t_bound: need eps > 0 and delta in (0, 1)");
  const double d2 = double(d) * double(d);
  const double a = eps * eps / (2.0 * d2);
  const double raw =
      (2.0 * v + (2.0 / 3.0) * r * a) / (a * a) * std::log(2.0 * d2 / delta);
  if (!std::isfinite(raw))
    throw NumericalError("t_bound: non-finite sample bound");
  if (raw > 9e18) throw CapacityError("t_bound: bound overflows int64");
  return std::max<int64_t>(1, int64_t(std::ceil(raw)));
}

Lemma3Quantities lemma3_quantities(const WeightedEnsemble& ens) {
  if (ens.members.empty()) throw InputError("lemma3_quantities: no members");
  ChoiMatrix ju = choi_of_unitary(UnitaryMatrix(ens.target));
  const Eigen::Index d2 = ju.dim();

  Lemma3Quantities out;
  out.d = ens.target.rows();
  CMat acc = CMat::Zero(d2, d2);
  for (const auto& mem : ens.members) {
    ChoiMatrix ji = choi_of_unitary(UnitaryMatrix(mem.unitary));
    CMat diff = ji.mat() - ju.mat();
    out.r = std::max(out.r, operator_norm(diff));
    if (mem.weight > 0.0) acc += mem.weight * diff * diff;
  }
  out.v = operator_norm(acc);
  return out;
}

std::vector<ConvergenceRow> convergence_study(
    const std::vector<std::pair<double, CircuitDistribution>>& entries,
    const std::vector<int64_t>& t_grid, int trials, int n_inputs,
    uint64_t seed) {
  if (trials < 1 || n_inputs < 1)
    throw InputError("convergence_study: need trials and inputs >= 1");
  std::vector<int64_t> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() || grid.front() < 1)
    throw InputError("convergence_study: grid entries must be >= 1");

  std::vector<ConvergenceRow> rows;
  for (size_t e = 0; e < entries.size(); ++e) {
    const double eps = entries[e].first;
    const CircuitDistribution& dist = entries[e].second;
    check_width(dist);
    const Eigen::Index d = Eigen::Index(1) << dist.width;

    // Inputs are shared by every trial of this entry.
    std::vector<CVec> inputs(static_cast<size_t>(n_inputs));
    std::vector<CMat> ideals(static_cast<size_t>(n_inputs));
    for (int i = 0; i < n_inputs; ++i) {
      auto rng = make_rng(derive_seed(seed, 0x1297, e, uint64_t(i)));
      inputs[size_t(i)] = haar_state(d, rng);
      CVec out_state = ideal_state(dist, inputs[size_t(i)]);
      ideals[size_t(i)] = out_state * out_state.adjoint();
    }

    // metric[g][trial]
    std::vector<std::vector<double>> metric(grid.size());
    for (auto& m : metric) m.resize(size_t(trials));

    for (int trial = 0; trial < trials; ++trial) {
      uint64_t trial_seed = derive_seed(seed, 0xc0 + e, uint64_t(trial));
      std::vector<CMat> acc(size_t(n_inputs), CMat::Zero(d, d));
      size_t next_grid = 0;
      for (int64_t t = 1; t <= grid.back(); ++t) {
        Circuit c = sample_circuit(dist, derive_seed(trial_seed, uint64_t(t)));
        for (int i = 0; i < n_inputs; ++i) {
          CMat s = inputs[size_t(i)];
          for (const auto& g : c.gates) apply_gate(s, g, dist.width);
          acc[size_t(i)] += s.col(0) * s.col(0).adjoint();
        }
        while (next_grid < grid.size() && grid[next_grid] == t) {
          double worst = 0.0;
          for (int i = 0; i < n_inputs; ++i) {
            CMat rho_hat = acc[size_t(i)] / double(t);
            worst = std::max(
                worst, 0.5 * trace_norm(rho_hat - ideals[size_t(i)]));
          }
          metric[next_grid][size_t(trial)] = worst;
          ++next_grid;
        }
      }
    }

    bool found_first = false;
    for (size_t g = 0; g < grid.size(); ++g) {
      ConvergenceRow row;
      row.eps = eps;
      row.t = grid[g];
      double sum = 0.0, lo = metric[g][0], hi = metric[g][0];
      for (double m : metric[g]) {
        sum += m;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      row.mean = sum / double(trials);
      row.lo = lo;
      row.hi = hi;
      if (!found_first && row.mean <= eps * eps) {
        row.is_first = true;
        found_first = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace ensc
