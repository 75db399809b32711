#include "ensc/linalg.hpp"

#include <cmath>

namespace ensc {

double frobenius_norm(const CMat& a) { return a.norm(); }

double operator_norm(const CMat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // Top eigenvalue of the Hermitian product A^dag A.
  CMat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("operator_norm: eigensolver did not converge");
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double trace_norm(const CMat& a, double herm_tol) {
  if (a.rows() != a.cols())
    throw InputError("trace_norm: matrix must be square");
  double herm_dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > herm_tol)
    throw InputError("trace_norm: matrix is not Hermitian (max deviation " +
                     std::to_string(herm_dev) + ")");
  CMat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("trace_norm: eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().sum();
}

std::pair<CMat, double> phase_align(const CMat& u, const CMat& v) {
  cxd g = (u.adjoint() * v).trace();
  double phi = (std::abs(g) == 0.0) ? 0.0 : std::arg(g);
  return {std::polar(1.0, phi) * u, phi};
}

UnitaryMatrix::UnitaryMatrix(CMat m, bool validate, double tol)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw InputError("UnitaryMatrix: matrix must be square");
  if (!is_power_of_two(m_.rows()))
    throw InputError("UnitaryMatrix: dimension must be a power of two");
  if (validate) {
    double dev =
        (m_.adjoint() * m_ - CMat::Identity(m_.rows(), m_.cols())).norm();
    if (dev > tol)
      throw InputError("UnitaryMatrix: not unitary (||U^dag U - I||_F = " +
                       std::to_string(dev) + ")");
  }
}

DensityMatrix::DensityMatrix(CMat m, bool validate, double tol)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw InputError("DensityMatrix: matrix must be square");
  if (!is_power_of_two(m_.rows()))
    throw InputError("DensityMatrix: dimension must be a power of two");
  if (validate) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw InputError("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - cxd(1.0, 0.0)) > tol)
      throw InputError("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m_ + m_.adjoint()),
                                           Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("DensityMatrix: eigensolver did not converge");
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw InputError("DensityMatrix: not positive semidefinite");
  }
}

ChoiMatrix::ChoiMatrix(CMat m, bool validate, double tol)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw InputError("ChoiMatrix: matrix must be square");
  Eigen::Index d2 = m_.rows();
  auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
  if (d * d != d2 || !is_power_of_two(d))
    throw InputError("ChoiMatrix: dimension must be the square of a power of two");
  if (validate) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw InputError("ChoiMatrix: not Hermitian");
    if (std::abs(m_.trace() - cxd(double(d), 0.0)) > tol)
      throw InputError("ChoiMatrix: trace != d");
  }
}

namespace {
// Row-major vectorization: w[a*d + i] = U(a, i). With the system index first
// and environment second, J(U) = w w^dag.
CVec vec_row_major(const CMat& u) {
  Eigen::Index d = u.rows();
  CVec w(d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index i = 0; i < d; ++i) w(a * d + i) = u(a, i);
  return w;
}
}  // namespace

ChoiMatrix choi_of_unitary(const UnitaryMatrix& u) {
  CVec w = vec_row_major(u.mat());
  return ChoiMatrix(w * w.adjoint(), /*validate=*/false);
}

ChoiMatrix choi_of_ensemble(const std::vector<UnitaryMatrix>& members,
                            const std::vector<double>& weights) {
  if (members.empty() || members.size() != weights.size())
    throw InputError("choi_of_ensemble: need matching nonempty members/weights");
  double sum = 0.0;
  for (double p : weights) {
    if (p < -1e-12) throw InputError("choi_of_ensemble: negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InputError("choi_of_ensemble: weights must sum to 1");
  Eigen::Index d = members.front().dim();
  CMat j = CMat::Zero(d * d, d * d);
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i].dim() != d)
      throw InputError("choi_of_ensemble: mixed dimensions");
    CVec w = vec_row_major(members[i].mat());
    j.noalias() += weights[i] * (w * w.adjoint());
  }
  return ChoiMatrix(std::move(j), /*validate=*/false);
}

double diamond_upper_bound(const ChoiMatrix& ja, const ChoiMatrix& jb) {
  if (ja.dim() != jb.dim())
    throw InputError("diamond_upper_bound: dimension mismatch");
  return trace_norm(ja.mat() - jb.mat());
}

CVec haar_state(Eigen::Index d, std::mt19937_64& rng) {
  if (d < 1) throw InputError("haar_state: dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cxd(gauss(rng), gauss(rng));
  double n = v.norm();
  if (n == 0.0) return haar_state(d, rng);
  return v / n;
}

CMat haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
  if (d < 1) throw InputError("haar_unitary: dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) g(r, c) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    cxd rii = r(i, i);
    cxd ph = (std::abs(rii) == 0.0) ? cxd(1.0, 0.0) : rii / std::abs(rii);
    q.col(i) *= ph;
  }
  return q;
}

}  // namespace ensc
