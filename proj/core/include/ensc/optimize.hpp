#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ensc/circuit.hpp"

namespace ensc {

// Right multiplication counterpart of apply_local_unitary:
// state <- state * embed(u, qubits, width).
void apply_local_unitary_right(CMat& state, const CMat& u,
                               const std::vector<int>& qubits, int width);

// Reference to one tunable angle inside a circuit.
struct ParamRef {
  size_t gate;   // index into Circuit::gates
  int slot;      // index into Gate::params
};

// Phase-insensitive distance objective for a parameterized circuit:
//   f(x) = 2d - 2 |tr(U(x)^dag V)|  =  min_phi || U(x) - e^{i phi} V ||_F^2.
// Gradients are analytic; one value_and_grad call costs a constant number of
// sweeps over the gate list.
class CircuitObjective {
 public:
  CircuitObjective(Circuit circ, std::vector<ParamRef> params, CMat target);

  int dim() const { return int(params_.size()); }
  const Circuit& circuit() const { return circ_; }

  void set_params(const Eigen::VectorXd& x);
  Eigen::VectorXd get_params() const;

  double value(const Eigen::VectorXd& x);
  double value_and_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad);

  // Frobenius distance min_phi ||U - e^{i phi} V||_F implied by f.
  static double error_from_value(double f) {
    return std::sqrt(std::max(f, 0.0));
  }

 private:
  CMat forward() const;

  Circuit circ_;
  std::vector<ParamRef> params_;
  CMat target_;
  Eigen::Index d_;
};

struct LbfgsOptions {
  int max_iters = 2000;
  double grad_tol = 1e-10;
  int history = 8;
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking. fg must fill *grad when the
// pointer is non-null and return the objective value.
OptimizeResult minimize_lbfgs(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& fg,
    Eigen::VectorXd x0, const LbfgsOptions& opts = {});

}  // namespace ensc
