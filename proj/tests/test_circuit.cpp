#include <cmath>
#include <complex>

#include "doctest.h"
#include "ensc/circuit.hpp"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "test_util.hpp"

using namespace ensc;
using cplx = std::complex<double>;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_SUITE("circuit") {

TEST_CASE("empty circuit is the identity") {
  Circuit c(2);
  CHECK(frobenius_norm(unitary(c).mat() - CMat::Identity(4, 4)) < 1e-12);
}

TEST_CASE("single qubit gate matrices") {
  Circuit cx(1);
  cx.add(Gate::x(0));
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(frobenius_norm(unitary(cx).mat() - x) < 1e-12);

  // u3(pi, 0, pi) is X in the standard convention.
  Circuit cu(1);
  cu.add(Gate::u3(0, kPi, 0.0, kPi));
  CHECK(frobenius_norm(unitary(cu).mat() - x) < 1e-12);

  // Symmetric rz: diag(e^{-i a/2}, e^{i a/2}).
  Circuit cr(1);
  cr.add(Gate::rz(0, 0.5));
  CMat rz = CMat::Zero(2, 2);
  rz(0, 0) = std::exp(cplx(0.0, -0.25));
  rz(1, 1) = std::exp(cplx(0.0, 0.25));
  CHECK(frobenius_norm(unitary(cr).mat() - rz) < 1e-12);
}

TEST_CASE("clifford algebra identities") {
  auto gate_mat = [](Gate g) {
    Circuit c(1);
    c.add(g);
    return unitary(c).mat();
  };
  CMat s = gate_mat(Gate::s(0));
  CMat t = gate_mat(Gate::t(0));
  CMat h = gate_mat(Gate::h(0));
  CMat z = gate_mat(Gate::z(0));
  CHECK(frobenius_norm(s * s - z) < 1e-12);
  CHECK(frobenius_norm(t * t - s) < 1e-12);
  CHECK(frobenius_norm(h * h - CMat::Identity(2, 2)) < 1e-12);
  CHECK(frobenius_norm(gate_mat(Gate::sdg(0)) - s.adjoint()) < 1e-12);
  CHECK(frobenius_norm(gate_mat(Gate::tdg(0)) - t.adjoint()) < 1e-12);
}

TEST_CASE("little endian qubit order") {
  // X on qubit 0 flips the least significant bit: |00> -> |01> (index 1).
  Circuit c(2);
  c.add(Gate::x(0));
  CMat u = unitary(c).mat();
  CHECK(std::abs(u(1, 0) - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(u(3, 2) - cplx(1.0, 0.0)) < 1e-12);

  // CNOT(control 0, target 1): |01> -> |11>.
  Circuit cc(2);
  cc.add(Gate::cnot(0, 1));
  CMat uc = unitary(cc).mat();
  CHECK(std::abs(uc(3, 1) - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(uc(0, 0) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("bell state column") {
  Circuit c(2);
  c.add(Gate::h(0));
  c.add(Gate::cnot(0, 1));
  CMat u = unitary(c).mat();
  double inv = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u(0, 0) - cplx(inv, 0.0)) < 1e-12);
  CHECK(std::abs(u(3, 0) - cplx(inv, 0.0)) < 1e-12);
  CHECK(std::abs(u(1, 0)) < 1e-12);
  CHECK(std::abs(u(2, 0)) < 1e-12);
}

TEST_CASE("apply_gate matches the unitary") {
  Circuit c = testutil::random_circuit(3, 25, 991);
  CMat u = unitary(c).mat();
  CMat state = CMat::Identity(8, 8);
  for (const Gate& g : c.gates) apply_gate(state, g, c.width);
  CHECK(frobenius_norm(state - u) < 1e-10);
}

TEST_CASE("gate counting per profile") {
  Circuit c(2);
  c.add(Gate::cnot(0, 1));
  c.add(Gate::t(0));
  c.add(Gate::tdg(1));
  c.add(Gate::rz(0, kPi / 2));       // clifford angle
  c.add(Gate::rz(1, 0.3));           // generic angle
  c.add(Gate::rz(0, 2.0 * kPi));     // full turn, clifford
  c.add(Gate::u3(1, 0.1, 0.2, 0.3));
  CHECK(count_expensive(c, GateSetProfile::NISQ) == 1);
  CHECK(count_expensive(c, GateSetProfile::FT) == 2);
  CHECK(count_rz(c) == 3);
  CHECK(count_non_clifford_rz(c) == 1);
}

TEST_CASE("random circuits are unitary") {
  for (uint64_t s = 0; s < 6; ++s) {
    Circuit c = testutil::random_circuit(2 + int(s % 3), 30, 100 + s);
    CMat u = unitary(c).mat();
    Eigen::Index d = u.rows();
    CHECK(frobenius_norm(u.adjoint() * u - CMat::Identity(d, d)) < 1e-9);
  }
}

TEST_CASE("width cap") {
  Circuit c(kMaxUnitaryWidth + 1);
  c.add(Gate::h(0));
  CHECK_THROWS_AS((void)unitary(c), CapacityError);
}

TEST_CASE("gate validation") {
  Circuit c(2);
  CHECK_THROWS_AS(c.add(Gate::h(2)), InputError);
  CHECK_THROWS_AS(c.add(Gate::cnot(1, 1)), InputError);
}

}  // TEST_SUITE
