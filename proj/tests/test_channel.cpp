#include <cmath>
#include <utility>

#include "doctest.h"
#include "ensc/channel.hpp"
#include "ensc/circuit.hpp"
#include "ensc/ensemble.hpp"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "ensc/qasm.hpp"
#include "ensc/rng.hpp"

using namespace ensc;

namespace {

// 1-qubit dephasing: members I and Z at weight 1/2 each.
CircuitDistribution dephasing_dist() {
  CircuitDistribution dist;
  dist.width = 1;
  dist.original = Circuit(1);  // ideal reference: identity

  WeightedEnsemble ens;
  ens.target = CMat::Identity(2, 2);
  ens.eps = 0.1;
  EnsembleMember mi;
  mi.circuit = Circuit(1);
  mi.unitary = CMat::Identity(2, 2);
  mi.weight = 0.5;
  EnsembleMember mz;
  mz.circuit = Circuit(1);
  mz.circuit.add(Gate::z(0));
  mz.unitary = unitary(mz.circuit).mat();
  mz.weight = 0.5;
  ens.members = {mi, mz};
  dist.blocks.push_back(DistBlock{{0}, std::move(ens)});
  return dist;
}

CircuitDistribution exact_singleton_dist(const Circuit& c) {
  CircuitDistribution dist;
  dist.width = c.width;
  dist.original = c;
  WeightedEnsemble ens;
  ens.target = unitary(c).mat();
  EnsembleMember m;
  m.circuit = c;
  m.unitary = ens.target;
  m.weight = 1.0;
  ens.members = {m};
  std::vector<int> map(size_t(c.width));
  for (int q = 0; q < c.width; ++q) map[size_t(q)] = q;
  dist.blocks.push_back(DistBlock{map, std::move(ens)});
  return dist;
}

DensityMatrix plus_state() {
  CMat rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  return DensityMatrix{rho};
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("dephasing takes the plus state to the maximally mixed state") {
  DensityMatrix out = apply_ensemble_channel(dephasing_dist(), plus_state());
  CHECK(frobenius_norm(out.mat() - 0.5 * CMat::Identity(2, 2)) < 1e-12);
}

TEST_CASE("sampling is deterministic in the seed") {
  CircuitDistribution dist = dephasing_dist();
  Circuit a = sample_circuit(dist, 42);
  Circuit b = sample_circuit(dist, 42);
  CHECK(emit_qasm(a) == emit_qasm(b));

  // Both members actually occur.
  bool saw_empty = false, saw_z = false;
  for (uint64_t s = 0; s < 64; ++s) {
    size_t n = sample_circuit(dist, s).size();
    (n == 0 ? saw_empty : saw_z) = true;
  }
  CHECK(saw_empty);
  CHECK(saw_z);
}

TEST_CASE("empirical channel approaches the exact one") {
  CircuitDistribution dist = dephasing_dist();
  DensityMatrix rho = plus_state();
  DensityMatrix exact = apply_ensemble_channel(dist, rho);
  DensityMatrix emp = empirical_channel(dist, 10000, rho, 7);
  CHECK(0.5 * trace_norm(emp.mat() - exact.mat()) < 5e-2);
}

TEST_CASE("observable error vanishes for an exact singleton") {
  Circuit c(2);
  c.add(Gate::h(0));
  c.add(Gate::cnot(0, 1));
  CircuitDistribution dist = exact_singleton_dist(c);
  CMat zz = CMat::Zero(4, 4);
  zz.diagonal() << 1, -1, -1, 1;
  CVec e0 = CVec::Zero(4);
  e0(0) = 1.0;
  CHECK(observable_error(dist, zz, e0) < 1e-12);
  CHECK(max_trace_distance(dist, 5, 3) < 1e-9);
}

TEST_CASE("max trace distance grows with the trial prefix") {
  CircuitDistribution dist = dephasing_dist();
  double five = max_trace_distance(dist, 5, 11);
  double ten = max_trace_distance(dist, 10, 11);
  CHECK(ten >= five - 1e-15);
  CHECK(ten > 0.0);  // dephasing moves generic pure states
}

TEST_CASE("concentration quantities of the dephasing block") {
  CircuitDistribution dist = dephasing_dist();
  Lemma3Quantities q = lemma3_quantities(dist.blocks[0].ens);
  CHECK(q.d == 2);
  // Deviations are measured from the target's choi (here the identity):
  // J_Z - J_I is a difference of orthogonal rank-1 matrices of norm 2, so
  // r = 2, and the half-weighted square gives v = 2 as well.
  CHECK(q.v == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(q.r == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("singleton has zero spread") {
  Circuit c(1);
  c.add(Gate::h(0));
  CircuitDistribution dist = exact_singleton_dist(c);
  Lemma3Quantities q = lemma3_quantities(dist.blocks[0].ens);
  CHECK(q.v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.r == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sample count bound at frozen inputs") {
  Lemma3Quantities q;
  q.v = 1e-4;
  q.r = 1e-2;
  q.d = 4;
  CHECK(q.t_bound(0.1, 0.01) == 16702);

  Lemma3Quantities zero;
  zero.d = 4;
  CHECK(zero.t_bound(0.1, 0.01) == 1);
}

TEST_CASE("convergence study shape and flags") {
  CircuitDistribution dist = dephasing_dist();
  std::vector<std::pair<double, CircuitDistribution>> entries;
  entries.emplace_back(0.99, dist);  // eps^2 ~ 0.98: reached immediately
  entries.emplace_back(1e-6, dist);  // never reached at these T
  std::vector<int64_t> grid = {1, 4, 16};
  auto rows = convergence_study(entries, grid, 3, 2, 5);
  REQUIRE(rows.size() == 6);
  int firsts_a = 0, firsts_b = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.lo <= r.mean + 1e-15);
    CHECK(r.mean <= r.hi + 1e-15);
    CHECK((i < 3 ? r.eps == 0.99 : r.eps == 1e-6));
    if (r.is_first) (i < 3 ? firsts_a : firsts_b)++;
  }
  CHECK(firsts_a == 1);
  CHECK(firsts_b == 0);
}

TEST_CASE("convergence study validates its arguments") {
  std::vector<std::pair<double, CircuitDistribution>> entries;
  entries.emplace_back(0.1, dephasing_dist());
  CHECK_THROWS_AS(convergence_study(entries, {0}, 3, 2, 5), InputError);
  CHECK_THROWS_AS(convergence_study(entries, {1}, 0, 2, 5), InputError);
}

}  // TEST_SUITE
