#include "ensc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ensc {

QPProblem build_qp(const std::vector<CMat>& members, const CMat& v) {
  if (members.empty()) throw InputError("build_qp: no members");
  const Eigen::Index d = v.rows();
  for (const auto& u : members)
    if (u.rows() != d || u.cols() != v.cols())
      throw InputError("build_qp: member dimension mismatch");

  const int m = int(members.size());
  QPProblem qp;
  qp.h.resize(m, m);
  qp.f.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double hij =
          2.0 * members[size_t(i)].conjugate().cwiseProduct(members[size_t(j)])
                    .sum()
                    .real();
      qp.h(i, j) = hij;
      qp.h(j, i) = hij;
    }
    qp.f(i) =
        -2.0 * members[size_t(i)].conjugate().cwiseProduct(v).sum().real();
  }
  qp.c0 = v.squaredNorm();
  return qp;
}

double qp_objective(const QPProblem& qp, const Eigen::VectorXd& p) {
  return 0.5 * p.dot(qp.h * p) + qp.f.dot(p) + qp.c0;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  const int n = int(y.size());
  if (n == 0) throw InputError("project_to_simplex: empty vector");
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += u[size_t(i)];
    double t = (cum - 1.0) / double(i + 1);
    if (u[size_t(i)] - t > 0) tau = t;
  }
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = std::max(0.0, y(i) - tau);
  return out;
}

namespace {

// max over carried coordinates of g_i - min(g); bounds the suboptimality on
// the simplex.
double kkt_residual(const QPProblem& qp, const Eigen::VectorXd& x) {
  Eigen::VectorXd g = qp.h * x + qp.f;
  double lam = g.minCoeff();
  double r = 0.0;
  for (int i = 0; i < x.size(); ++i)
    if (x(i) > 1e-12) r = std::max(r, g(i) - lam);
  return r;
}

// Exact finisher for the degenerate faces first-order methods crawl on
// (near-duplicate members make H singular): solve the equality KKT system
// on the current support by least squares, drop negative coordinates, pull
// in gradient violators, repeat until stationary.
Eigen::VectorXd active_set_polish(const QPProblem& qp, Eigen::VectorXd x) {
  const int m = int(qp.f.size());
  std::vector<char> in_s(size_t(m), 0);
  bool any = false;
  for (int i = 0; i < m; ++i) {
    in_s[size_t(i)] = x(i) > 1e-10;
    any = any || in_s[size_t(i)];
  }
  if (!any) {
    int s = 0;
    (qp.h * x + qp.f).minCoeff(&s);
    in_s[size_t(s)] = 1;
  }
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<int> s;
    for (int i = 0; i < m; ++i)
      if (in_s[size_t(i)]) s.push_back(i);
    const int k = int(s.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) a(r, c) = qp.h(s[size_t(r)], s[size_t(c)]);
      a(r, k) = -1.0;  // stationarity: (H p)_i + f_i = nu on the support
      a(k, r) = 1.0;
      rhs(r) = -qp.f(s[size_t(r)]);
    }
    rhs(k) = 1.0;
    Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(rhs);
    int drop = -1;
    double most = -1e-12;
    for (int r = 0; r < k; ++r)
      if (sol(r) < most) {
        most = sol(r);
        drop = s[size_t(r)];
      }
    if (drop >= 0 && k > 1) {
      in_s[size_t(drop)] = 0;
      continue;
    }
    Eigen::VectorXd cand = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < k; ++r) cand(s[size_t(r)]) = std::max(0.0, sol(r));
    const double tot = cand.sum();
    if (!(tot > 0.0)) return x;
    cand /= tot;
    const double nu = sol(k);
    Eigen::VectorXd g = qp.h * cand + qp.f;
    int add = -1;
    double worst = nu - 1e-12;
    for (int i = 0; i < m; ++i) {
      if (in_s[size_t(i)]) continue;
      if (g(i) < worst) {
        worst = g(i);
        add = i;
      }
    }
    if (add >= 0) {
      in_s[size_t(add)] = 1;
      continue;
    }
    return cand;
  }
  return x;
}

}  // namespace

Eigen::VectorXd solve_simplex_qp(const QPProblem& qp, double tol) {
  const int m = int(qp.f.size());
  if (m == 0 || qp.h.rows() != m || qp.h.cols() != m)
    throw InputError("solve_simplex_qp: inconsistent problem sizes");
  if (m == 1) return Eigen::VectorXd::Ones(1);
  if ((qp.h - qp.h.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw InputError("solve_simplex_qp: H is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qp.h);
  if (es.info() != Eigen::Success)
    throw NumericalError("solve_simplex_qp: eigensolver failed on H");
  const double step = 1.0 / std::max(es.eigenvalues().maxCoeff(), 1e-12);

  Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd x_old = x, y = x;
  double t_k = 1.0;
  double f_cur = qp_objective(qp, x);
  double best_obj = f_cur;
  Eigen::VectorXd best_x = x;

  for (int k = 0; k < 20000; ++k) {
    Eigen::VectorXd g = qp.h * y + qp.f;
    Eigen::VectorXd x_new = project_to_simplex(y - step * g);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    y = x_new + ((t_k - 1.0) / t_next) * (x_new - x);
    double f_new = qp_objective(qp, x_new);
    if (!std::isfinite(f_new))
      throw QPFailure("solve_simplex_qp: non-finite objective", best_x);
    if (f_new > f_cur) {  // momentum overshoot, restart
      t_next = 1.0;
      y = x_new;
    }
    if (f_new < best_obj) {
      best_obj = f_new;
      best_x = x_new;
    }
    x_old = x;
    x = x_new;
    t_k = t_next;
    f_cur = f_new;
    if (k % 10 == 9 && kkt_residual(qp, x) <= tol) return x;
  }
  x = active_set_polish(qp, x);
  if (double f = qp_objective(qp, x); f < best_obj) {
    best_obj = f;
    best_x = x;
  }
  if (kkt_residual(qp, x) <= tol) return x;

  // Frank-Wolfe rescue with exact line search, then a few projected steps to
  // shed the tiny tail weights it leaves behind.
  x = best_x;
  for (int k = 0; k < 200000; ++k) {
    Eigen::VectorXd g = qp.h * x + qp.f;
    int s = 0;
    g.minCoeff(&s);
    Eigen::VectorXd d = -x;
    d(s) += 1.0;
    double gap = -g.dot(d);
    if (gap <= 0.1 * tol) break;
    double curv = d.dot(qp.h * d);
    double gamma = curv > 0 ? std::min(1.0, gap / curv) : 1.0;
    x += gamma * d;
  }
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd g = qp.h * x + qp.f;
    x = project_to_simplex(x - step * g);
    double f_new = qp_objective(qp, x);
    if (f_new < best_obj) {
      best_obj = f_new;
      best_x = x;
    }
    if (k % 10 == 9 && kkt_residual(qp, x) <= tol) return x;
  }
  x = active_set_polish(qp, x);
  if (double f = qp_objective(qp, x); f < best_obj) {
    best_obj = f;
    best_x = x;
  }
  if (kkt_residual(qp, x) <= tol) return x;
  throw QPFailure("solve_simplex_qp: KKT tolerance not reached", best_x);
}

double weighted_ensemble_error(const std::vector<CMat>& members,
                               const Eigen::VectorXd& p, const CMat& v) {
  if (int(members.size()) != p.size())
    throw InputError("weighted_ensemble_error: weight count mismatch");
  if (members.empty()) throw InputError("weighted_ensemble_error: no members");
  double wsum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < -1e-12)
      throw InputError("weighted_ensemble_error: negative weight");
    wsum += p(i);
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw InputError("weighted_ensemble_error: weights do not sum to 1");
  CMat acc = CMat::Zero(v.rows(), v.cols());
  for (size_t i = 0; i < members.size(); ++i)
    acc += p(int(i)) * members[i];
  return (acc - v).norm();
}

double bias_norm(const std::vector<CMat>& members, const CMat& v) {
  if (members.empty()) throw InputError("bias_norm: no members");
  CMat acc = CMat::Zero(v.rows(), v.cols());
  for (const auto& u : members) acc += u;
  acc /= double(members.size());
  return (acc - v).norm();
}

double filter_constant(double eps) { return eps > 1e-2 ? 2.0 : 20.0; }

int ensemble_size_bound(double eps, double eps_prime) {
  if (eps <= 0 || eps_prime < 0)
    throw InputError("ensemble_size_bound: bad arguments");
  double m = std::ceil(eps_prime / (eps * eps * eps * eps));
  if (!(m >= 1.0)) return 1;
  if (m > 2e9) throw CapacityError("ensemble_size_bound: bound overflows int");
  return int(m);
}

double variance_estimate(const std::vector<CMat>& members) {
  if (members.size() < 2)
    throw InputError("variance_estimate: needs at least two members");
  CMat mean = CMat::Zero(members[0].rows(), members[0].cols());
  for (const auto& u : members) mean += u;
  mean /= double(members.size());
  double acc = 0.0;
  for (const auto& u : members) acc += (u - mean).squaredNorm();
  return acc / double(members.size());
}

std::vector<SynthesisResult> dedup_members(std::vector<SynthesisResult> pool,
                                           double tol) {
  std::vector<SynthesisResult> out;
  for (auto& r : pool) {
    bool dup = false;
    for (const auto& kept : out) {
      if (kept.unitary.rows() == r.unitary.rows() &&
          (kept.unitary - r.unitary).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(r));
  }
  return out;
}

WeightedEnsemble make_weighted_ensemble(const CMat& target, double eps,
                                        std::vector<SynthesisResult> pool,
                                        double tol) {
  if (pool.empty()) throw InputError("make_weighted_ensemble: empty pool");
  if (eps <= 0) throw InputError("make_weighted_ensemble: eps must be > 0");
  pool = dedup_members(std::move(pool));

  std::vector<CMat> us;
  us.reserve(pool.size());
  for (const auto& r : pool) us.push_back(r.unitary);

  QPProblem qp = build_qp(us, target);
  Eigen::VectorXd p = solve_simplex_qp(qp, tol);

  WeightedEnsemble ens;
  ens.target = target;
  ens.eps = eps;
  ens.members.reserve(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    EnsembleMember mem;
    mem.circuit = std::move(pool[i].circuit);
    mem.unitary = std::move(pool[i].unitary);
    mem.weight = p(int(i));
    mem.expensive_count = pool[i].expensive_count;
    mem.e_i = pool[i].e_i;
    ens.members.push_back(std::move(mem));
  }
  ens.wee = weighted_ensemble_error(us, p, target);
  ens.bias = bias_norm(us, target);
  ens.gamma = ens.wee / (eps * eps);
  ens.gamma_b = ens.bias / (eps * eps);
  ens.accepted = false;
  return ens;
}

WeightedEnsemble singleton_ensemble(const CMat& target, double eps,
                                    const Block& original,
                                    GateSetProfile profile) {
  WeightedEnsemble ens;
  ens.target = target;
  ens.eps = eps;
  EnsembleMember mem;
  mem.circuit = original.circuit;
  mem.unitary = target;  // the block realizes its own target exactly
  mem.weight = 1.0;
  mem.expensive_count = count_expensive(original.circuit, profile);
  mem.e_i = 0.0;
  ens.members.push_back(std::move(mem));
  ens.wee = 0.0;
  ens.bias = 0.0;
  ens.gamma = 0.0;
  ens.gamma_b = 0.0;
  ens.accepted = false;
  return ens;
}

WeightedEnsemble filter_block(WeightedEnsemble ens, const Block& original,
                              double eps, GateSetProfile profile) {
  double cap = filter_constant(eps) * eps * eps;
  if (ens.wee <= cap) {
    ens.accepted = true;
    return ens;
  }
  return singleton_ensemble(ens.target, eps, original, profile);
}

}  // namespace ensc
