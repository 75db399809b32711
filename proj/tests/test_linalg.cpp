#include <cmath>
#include <complex>

#include "doctest.h"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "ensc/rng.hpp"

using namespace ensc;
using cplx = std::complex<double>;

namespace {

CMat pauli_x() {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

CMat random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  CMat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      a(i, j) = cplx(normal01(rng), normal01(rng));
  return a;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("frobenius norm fixed values") {
  CHECK(frobenius_norm(CMat::Zero(2, 2)) == 0.0);
  CHECK(frobenius_norm(CMat::Identity(2, 2) - pauli_x()) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(frobenius_norm(CMat::Identity(8, 8)) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("operator norm fixed values") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  CHECK(operator_norm(d) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(operator_norm(CMat::Identity(2, 2) - pauli_x()) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("trace norm fixed values") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK(trace_norm(d) == doctest::Approx(2.0).epsilon(1e-12));

  // |0><0| - |+><+| has eigenvalues +-1/sqrt(2).
  CMat p0 = CMat::Zero(2, 2);
  p0(0, 0) = 1.0;
  CMat pp(2, 2);
  pp << 0.5, 0.5, 0.5, 0.5;
  CHECK(trace_norm(p0 - pp) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CMat rho(2, 2);
  rho << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
  CHECK(trace_norm(rho - rho) == doctest::Approx(0.0));
}

TEST_CASE("trace norm rejects non-hermitian and non-square input") {
  CMat a(2, 2);
  a << 0, 1, 0, 0;
  CHECK_THROWS_AS((void)trace_norm(a), InputError);
  CHECK_THROWS_AS((void)trace_norm(CMat::Zero(2, 3)), InputError);
}

TEST_CASE("phase alignment recovers a pure phase") {
  auto rng = make_rng(11);
  CMat u = haar_unitary(4, rng);
  double phi = 1.234;
  CMat v = std::exp(cplx(0.0, phi)) * u;
  auto [aligned, got] = phase_align(u, v);
  CHECK(frobenius_norm(aligned - v) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(std::remainder(got - phi, 2.0 * M_PI)) < 1e-12);

  // Aligning never increases the distance.
  CMat w = haar_unitary(4, rng);
  CHECK(frobenius_norm(phase_align(u, w).first - w) <=
        frobenius_norm(u - w) + 1e-12);
}

TEST_CASE("unitary matrix validation") {
  auto rng = make_rng(7);
  CHECK_NOTHROW(UnitaryMatrix(haar_unitary(8, rng)));
  CMat bad = CMat::Identity(4, 4);
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(UnitaryMatrix{bad}, InputError);
  CHECK_THROWS_AS(UnitaryMatrix{CMat::Identity(3, 3)}, InputError);
}

TEST_CASE("density matrix validation") {
  CMat rho = CMat::Zero(2, 2);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix{rho});
  rho(1, 1) = 0.6;
  CHECK_THROWS_AS(DensityMatrix{rho}, InputError);
}

TEST_CASE("choi of unitary basics") {
  auto rng = make_rng(23);
  for (int i = 0; i < 5; ++i) {
    UnitaryMatrix u(haar_unitary(4, rng));
    ChoiMatrix j = choi_of_unitary(u);
    CHECK(j.mat().trace().real() == doctest::Approx(4.0).epsilon(1e-10));
    // Rank 1: largest eigenvalue carries the whole trace.
    CHECK(operator_norm(j.mat()) == doctest::Approx(4.0).epsilon(1e-9));
  }
  ChoiMatrix ji = choi_of_unitary(UnitaryMatrix(CMat::Identity(2, 2)));
  CHECK(ji.mat().trace().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("choi of ensemble validates weights") {
  UnitaryMatrix id(CMat::Identity(2, 2));
  UnitaryMatrix x{pauli_x()};
  CHECK_NOTHROW(choi_of_ensemble({id, x}, {0.5, 0.5}));
  CHECK_THROWS_AS(choi_of_ensemble({id, x}, {0.7, 0.5}), InputError);
  CHECK_THROWS_AS(choi_of_ensemble({id, x}, {1.5, -0.5}), InputError);
  CHECK_THROWS_AS(choi_of_ensemble({}, {}), InputError);
}

TEST_CASE("diamond bound fixed value for identity vs bit flip") {
  ChoiMatrix ji = choi_of_unitary(UnitaryMatrix(CMat::Identity(2, 2)));
  ChoiMatrix jx = choi_of_unitary(UnitaryMatrix{pauli_x()});
  CHECK(diamond_upper_bound(ji, jx) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(diamond_upper_bound(ji, ji) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("norm inequality chain on random matrices") {
  auto rng = make_rng(31);
  for (int i = 0; i < 50; ++i) {
    Eigen::Index d = 2 + Eigen::Index(rng() % 7);
    CMat a = random_matrix(d, rng);
    double op = operator_norm(a);
    double fro = frobenius_norm(a);
    CHECK(op <= fro + 1e-9);
    CHECK(fro <= std::sqrt(double(d)) * op + 1e-9);
  }
  // Rank one: the two norms agree.
  CVec v = haar_state(8, rng);
  CMat outer = v * v.adjoint();
  CHECK(operator_norm(outer) == doctest::Approx(frobenius_norm(outer)).epsilon(1e-9));
}

TEST_CASE("frobenius distance is unitarily invariant") {
  auto rng = make_rng(37);
  for (int i = 0; i < 20; ++i) {
    CMat u = haar_unitary(4, rng);
    CMat v = haar_unitary(4, rng);
    CMat w = haar_unitary(4, rng);
    CHECK(frobenius_norm(w * u - w * v) ==
          doctest::Approx(frobenius_norm(u - v)).epsilon(1e-10));
  }
}

TEST_CASE("degenerate ensemble weights collapse to the first member") {
  auto rng = make_rng(41);
  for (int i = 0; i < 10; ++i) {
    UnitaryMatrix a(haar_unitary(2, rng));
    UnitaryMatrix b(haar_unitary(2, rng));
    ChoiMatrix j = choi_of_ensemble({a, b}, {1.0, 0.0});
    CHECK(frobenius_norm(j.mat() - choi_of_unitary(a).mat()) < 1e-12);
  }
}

TEST_CASE("haar state and unitary shapes") {
  auto rng = make_rng(43);
  CVec psi = haar_state(8, rng);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CMat u = haar_unitary(4, rng);
  CHECK(frobenius_norm(u.adjoint() * u - CMat::Identity(4, 4)) < 1e-12);
  CHECK(is_power_of_two(8));
  CHECK_FALSE(is_power_of_two(6));
}

}  // TEST_SUITE
