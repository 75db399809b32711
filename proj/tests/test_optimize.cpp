#include <cmath>

#include "doctest.h"
#include "ensc/circuit.hpp"
#include "ensc/linalg.hpp"
#include "ensc/optimize.hpp"
#include "ensc/rng.hpp"
#include "test_util.hpp"

using namespace ensc;

namespace {

// Circuit with every angle parameterized, plus the references into it.
std::pair<Circuit, std::vector<ParamRef>> ansatz_2q() {
  Circuit c(2);
  c.add(Gate::u3(0, 0.1, 0.2, 0.3));
  c.add(Gate::u3(1, 0.4, 0.5, 0.6));
  c.add(Gate::cnot(0, 1));
  c.add(Gate::rz(1, 0.7));
  c.add(Gate::u3(0, 0.8, 0.9, 1.0));
  std::vector<ParamRef> refs;
  for (size_t g = 0; g < c.size(); ++g)
    for (int s = 0; s < int(c.gates[g].params.size()); ++s)
      refs.push_back({g, s});
  return {c, refs};
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("value matches the phase aligned distance") {
  auto [c, refs] = ansatz_2q();
  auto rng = make_rng(17);
  CMat v = haar_unitary(4, rng);
  CircuitObjective obj(c, refs, v);
  Eigen::VectorXd x = obj.get_params();
  double f = obj.value(x);
  obj.set_params(x);
  double direct = testutil::aligned_dist(unitary(obj.circuit()).mat(), v);
  CHECK(CircuitObjective::error_from_value(f) ==
        doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("analytic gradient matches finite differences") {
  auto [c, refs] = ansatz_2q();
  auto rng = make_rng(19);
  CMat v = haar_unitary(4, rng);
  CircuitObjective obj(c, refs, v);
  Eigen::VectorXd x = obj.get_params();
  for (int i = 0; i < x.size(); ++i) x(i) += 0.1 * normal01(rng);

  Eigen::VectorXd grad(x.size());
  double f0 = obj.value_and_grad(x, grad);
  CHECK(f0 == doctest::Approx(obj.value(x)).epsilon(1e-12));

  const double h = 1e-6;
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    double fd = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
    CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("lbfgs minimizes a quadratic bowl") {
  Eigen::VectorXd a(3);
  a << 1.0, -2.0, 0.5;
  auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    if (grad) *grad = 2.0 * (x - a);
    return (x - a).squaredNorm();
  };
  OptimizeResult r = minimize_lbfgs(fg, Eigen::VectorXd::Zero(3));
  CHECK(r.converged);
  CHECK((r.x - a).norm() < 1e-7);
  CHECK(r.f < 1e-12);
}

TEST_CASE("lbfgs rediscovers a circuit's own angles") {
  auto [c, refs] = ansatz_2q();
  CMat v = unitary(c).mat();
  CircuitObjective obj(c, refs, v);
  Eigen::VectorXd x0 = obj.get_params();
  auto rng = make_rng(29);
  for (int i = 0; i < x0.size(); ++i) x0(i) += 0.15 * normal01(rng);
  auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    if (grad) {
      Eigen::VectorXd g(x.size());
      double f = obj.value_and_grad(x, g);
      *grad = g;
      return f;
    }
    return obj.value(x);
  };
  OptimizeResult r = minimize_lbfgs(fg, x0);
  CHECK(CircuitObjective::error_from_value(r.f) < 1e-7);
}

TEST_CASE("right multiplication embeds on the correct wires") {
  auto rng = make_rng(31);
  CMat u = haar_unitary(2, rng);
  CMat state = haar_unitary(4, rng);

  Circuit c(2);
  c.add(Gate::u3(1, 0.3, 0.8, -0.2));
  CMat embedded = unitary(c).mat();
  CMat local(2, 2);
  {
    Circuit one(1);
    one.add(Gate::u3(0, 0.3, 0.8, -0.2));
    local = unitary(one).mat();
  }

  CMat got = state;
  apply_local_unitary_right(got, local, {1}, 2);
  CHECK(frobenius_norm(got - state * embedded) < 1e-12);
}

}  // TEST_SUITE
