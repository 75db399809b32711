#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ensc/circuit.hpp"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "ensc/partition.hpp"
#include "ensc/synth.hpp"

namespace ensc {

struct EnsembleMember {
  Circuit circuit;
  CMat unitary;  // phase-aligned toward the target
  double weight = 0.0;
  int expensive_count = 0;
  double e_i = 0.0;
};

// One block's weighted ensemble plus its quality numbers. wee is
// ||sum_i p_i U_i - target||_F; gamma and gamma_b are wee and bias in units
// of eps^2.
struct WeightedEnsemble {
  CMat target;
  double eps = 0.0;
  std::vector<EnsembleMember> members;
  double wee = 0.0;
  double bias = 0.0;
  double gamma = 0.0;
  double gamma_b = 0.0;
  bool accepted = false;
};

// min over the simplex of (1/2) p^T H p + f^T p + c0, which equals wee^2:
// H_ij = 2 Re tr(U_i^dag U_j), f_i = -2 Re tr(U_i^dag V), c0 = tr(V^dag V).
struct QPProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd f;
  double c0 = 0.0;
};

// Raised when the solver cannot reach the KKT tolerance; best_iterate is the
// lowest-objective feasible point seen.
class QPFailure : public NumericalError {
 public:
  QPFailure(const std::string& msg, Eigen::VectorXd best)
      : NumericalError(msg), best_iterate(std::move(best)) {}
  Eigen::VectorXd best_iterate;
};

QPProblem build_qp(const std::vector<CMat>& members, const CMat& v);

double qp_objective(const QPProblem& qp, const Eigen::VectorXd& p);

// Euclidean projection onto the probability simplex (sort and threshold).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y);

// Projected gradient with Nesterov momentum, Frank-Wolfe fallback. On return
// the KKT residual (spread of active gradient components over the minimum
// component) is <= tol, which also bounds the suboptimality by tol.
Eigen::VectorXd solve_simplex_qp(const QPProblem& qp, double tol = 1e-9);

double weighted_ensemble_error(const std::vector<CMat>& members,
                               const Eigen::VectorXd& p, const CMat& v);

// ||(1/M) sum_i U_i - V||_F, the unweighted pool mean against the target.
double bias_norm(const std::vector<CMat>& members, const CMat& v);

// Acceptance constant: 2 above eps = 1e-2, 20 at or below it.
double filter_constant(double eps);

// Members needed so the sampling variance term eps'/M sits at eps^4:
// ceil(eps'/eps^4), at least 1.
int ensemble_size_bound(double eps, double eps_prime);

// (1/M) sum_i ||U_i - mean||_F^2 over the pool; the eps' estimator.
double variance_estimate(const std::vector<CMat>& members);

// Drops members whose unitary is within tol (Frobenius) of an earlier one.
std::vector<SynthesisResult> dedup_members(std::vector<SynthesisResult> pool,
                                           double tol = 1e-9);

// Dedups the pool, solves the weight QP and fills in every derived field
// except `accepted` (filter_block decides that). QPFailure propagates.
WeightedEnsemble make_weighted_ensemble(const CMat& target, double eps,
                                        std::vector<SynthesisResult> pool,
                                        double tol = 1e-9);

// The reverted form of a block: its own circuit with weight 1 and wee 0.
WeightedEnsemble singleton_ensemble(const CMat& target, double eps,
                                    const Block& original,
                                    GateSetProfile profile);

// Accepts the ensemble iff wee <= C(eps) * eps^2, else replaces it with the
// singleton fallback.
WeightedEnsemble filter_block(WeightedEnsemble ens, const Block& original,
                              double eps,
                              GateSetProfile profile = GateSetProfile::NISQ);

}  // namespace ensc
