#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ensc/errors.hpp"

namespace ensc {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline bool is_power_of_two(Eigen::Index n) {
  return n >= 1 && (n & (n - 1)) == 0;
}

// || A ||_F = sqrt(tr(A^dag A)).
double frobenius_norm(const CMat& a);

// Largest singular value. Computed from the top eigenvalue of A^dag A, which
// keeps everything in the Hermitian solver; throws NumericalError if the
// eigensolver reports non-convergence.
double operator_norm(const CMat& a);

// Sum of singular values of a Hermitian matrix (= sum of |eigenvalue|).
// Requires ||A - A^dag||_max <= herm_tol, else InputError.
double trace_norm(const CMat& a, double herm_tol = 1e-8);

// Phase alignment: returns (exp(i*phi) * u, phi) with phi chosen so that
// ||exp(i*phi) u - v||_F is minimal, i.e. phi = arg(tr(u^dag v)). When
// tr(u^dag v) == 0 the phase is left at 0.
std::pair<CMat, double> phase_align(const CMat& u, const CMat& v);

// ---- domain matrix types ------------------------------------------------

// d x d unitary, d a power of two. Validation checks ||U^dag U - I||_F.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMat m, bool validate = true, double tol = 1e-10);
  const CMat& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMat m_;
};

// Density matrix: Hermitian, unit trace, PSD up to -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMat m, bool validate = true, double tol = 1e-8);
  const CMat& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMat m_;
};

// Choi matrix of a d-dimensional channel, stored as a d^2 x d^2 Hermitian
// matrix with trace d. Index convention: composite index (a, i) = a*d + i with
// the system index a first and the environment index i second, which makes
// the Choi matrix of a unitary channel the outer product of the row-major
// vectorization of U with itself.
class ChoiMatrix {
 public:
  explicit ChoiMatrix(CMat m, bool validate = true, double tol = 1e-8);
  const CMat& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMat m_;
};

// J(U) = sum_ij U|i><j|U^dag (x) |i><j|  (rank one, trace d).
ChoiMatrix choi_of_unitary(const UnitaryMatrix& u);

// Choi matrix of the mixed-unitary channel sum_i p_i U_i rho U_i^dag.
// Weights must be nonnegative and sum to 1 within 1e-9.
ChoiMatrix choi_of_ensemble(const std::vector<UnitaryMatrix>& members,
                            const std::vector<double>& weights);

// Trace-norm bound on the diamond norm of the difference of two channels:
// || E_A - E_B ||_diamond <= || J_A - J_B ||_1. Half of this value upper
// bounds the diamond-distance (1/2)||.||_diamond.
double diamond_upper_bound(const ChoiMatrix& ja, const ChoiMatrix& jb);

// ---- random objects (used by sampling-based metrics and by tests) --------

// Haar-random pure state of dimension d: normalized complex Gaussian vector.
CVec haar_state(Eigen::Index d, std::mt19937_64& rng);

// Haar-random unitary via QR of a complex Ginibre matrix with the standard
// phase fix on R's diagonal.
CMat haar_unitary(Eigen::Index d, std::mt19937_64& rng);

}  // namespace ensc
