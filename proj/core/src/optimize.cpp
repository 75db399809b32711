#include "ensc/optimize.hpp"

#include <cmath>
#include <deque>

#include "ensc/errors.hpp"

namespace ensc {

namespace {

// Partial derivative of a gate matrix with respect to parameter `slot`.
CMat dgate_matrix(const Gate& g, int slot) {
  const cxd i1(0.0, 1.0);
  switch (g.kind) {
    case GateKind::U3: {
      double th = g.params[0], ph = g.params[1], la = g.params[2];
      double c = std::cos(th / 2), s = std::sin(th / 2);
      cxd el = std::polar(1.0, la), ep = std::polar(1.0, ph),
          epl = std::polar(1.0, ph + la);
      CMat m(2, 2);
      if (slot == 0) {
        m << -0.5 * s, -0.5 * el * c, 0.5 * ep * c, -0.5 * epl * s;
      } else if (slot == 1) {
        m << 0.0, 0.0, i1 * ep * s, i1 * epl * c;
      } else {
        m << 0.0, -i1 * el * s, 0.0, i1 * epl * c;
      }
      return m;
    }
    case GateKind::RZ: {
      double th = g.params[0];
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = -0.5 * i1 * std::polar(1.0, -th / 2);
      m(1, 1) = 0.5 * i1 * std::polar(1.0, th / 2);
      return m;
    }
    default:
      throw InputError("dgate_matrix: gate has no parameters");
  }
}

// R(a, b) = sum over untouched-bit assignments of W(base|a, base|b).
CMat reduce_local(const CMat& w, const std::vector<int>& qubits, int width) {
  int k = int(qubits.size());
  Eigen::Index dk = Eigen::Index(1) << k;
  Eigen::Index d = Eigen::Index(1) << width;
  std::vector<Eigen::Index> masks(k);
  for (int j = 0; j < k; ++j) masks[j] = Eigen::Index(1) << qubits[j];
  Eigen::Index rest_mask = d - 1;
  for (auto m : masks) rest_mask &= ~m;

  auto expand = [&](Eigen::Index a, Eigen::Index base) {
    Eigen::Index idx = base;
    for (int j = 0; j < k; ++j)
      if (a & (Eigen::Index(1) << j)) idx |= masks[j];
    return idx;
  };

  CMat r = CMat::Zero(dk, dk);
  Eigen::Index base = 0;
  while (true) {
    for (Eigen::Index a = 0; a < dk; ++a)
      for (Eigen::Index b = 0; b < dk; ++b)
        r(a, b) += w(expand(a, base), expand(b, base));
    base = (base - rest_mask) & rest_mask;
    if (base == 0) break;
  }
  return r;
}

}  // namespace

void apply_local_unitary_right(CMat& state, const CMat& u,
                               const std::vector<int>& qubits, int width) {
  int k = int(qubits.size());
  Eigen::Index dk = Eigen::Index(1) << k;
  if (u.rows() != dk || u.cols() != dk)
    throw InputError("apply_local_unitary_right: operator size mismatch");
  Eigen::Index d = Eigen::Index(1) << width;
  if (state.cols() != d)
    throw InputError("apply_local_unitary_right: state size mismatch");

  std::vector<Eigen::Index> masks(k);
  for (int j = 0; j < k; ++j) masks[j] = Eigen::Index(1) << qubits[j];
  Eigen::Index rest_mask = d - 1;
  for (auto m : masks) rest_mask &= ~m;

  CVec scratch(dk);
  auto expand = [&](Eigen::Index a, Eigen::Index base) {
    Eigen::Index idx = base;
    for (int j = 0; j < k; ++j)
      if (a & (Eigen::Index(1) << j)) idx |= masks[j];
    return idx;
  };
  for (Eigen::Index row = 0; row < state.rows(); ++row) {
    Eigen::Index base = 0;
    while (true) {
      for (Eigen::Index a = 0; a < dk; ++a)
        scratch(a) = state(row, expand(a, base));
      for (Eigen::Index b = 0; b < dk; ++b) {
        cxd acc(0.0, 0.0);
        for (Eigen::Index a = 0; a < dk; ++a) acc += scratch(a) * u(a, b);
        state(row, expand(b, base)) = acc;
      }
      base = (base - rest_mask) & rest_mask;
      if (base == 0) break;
    }
  }
}

CircuitObjective::CircuitObjective(Circuit circ, std::vector<ParamRef> params,
                                   CMat target)
    : circ_(std::move(circ)), params_(std::move(params)),
      target_(std::move(target)) {
  d_ = Eigen::Index(1) << circ_.width;
  if (target_.rows() != d_ || target_.cols() != d_)
    throw InputError("CircuitObjective: target dimension mismatch");
  for (const auto& p : params_) {
    if (p.gate >= circ_.gates.size() ||
        p.slot >= gate_param_count(circ_.gates[p.gate].kind))
      throw InputError("CircuitObjective: bad parameter reference");
  }
}

void CircuitObjective::set_params(const Eigen::VectorXd& x) {
  if (x.size() != dim()) throw InputError("CircuitObjective: bad vector size");
  for (int i = 0; i < dim(); ++i)
    circ_.gates[params_[i].gate].params[params_[i].slot] = x(i);
}

Eigen::VectorXd CircuitObjective::get_params() const {
  Eigen::VectorXd x(dim());
  for (int i = 0; i < dim(); ++i)
    x(i) = circ_.gates[params_[i].gate].params[params_[i].slot];
  return x;
}

CMat CircuitObjective::forward() const {
  CMat u = CMat::Identity(d_, d_);
  for (const auto& g : circ_.gates) apply_gate(u, g, circ_.width);
  return u;
}

double CircuitObjective::value(const Eigen::VectorXd& x) {
  set_params(x);
  CMat u = forward();
  cxd g = u.conjugate().cwiseProduct(target_).sum();
  return 2.0 * double(d_) - 2.0 * std::abs(g);
}

double CircuitObjective::value_and_grad(const Eigen::VectorXd& x,
                                        Eigen::VectorXd& grad) {
  set_params(x);
  grad.resize(dim());
  grad.setZero();
  CMat u = forward();
  cxd g = u.conjugate().cwiseProduct(target_).sum();
  double f = 2.0 * double(d_) - 2.0 * std::abs(g);
  if (std::abs(g) < 1e-300) return f;  // stationary at a phase singularity

  // Group parameter refs by gate for the backward sweep.
  std::vector<std::vector<std::pair<int, int>>> by_gate(circ_.gates.size());
  for (int i = 0; i < dim(); ++i)
    by_gate[params_[i].gate].push_back({params_[i].slot, i});

  // Z_k = S_k^dag V P_k^dag, walked from k = L down to 1; the gradient of
  // gate k reads off M_k = Z_k * emb(G_k).
  CMat z = target_ * u.adjoint();
  cxd gbar_over = std::conj(g) / std::abs(g);
  for (size_t k = circ_.gates.size(); k-- > 0;) {
    const Gate& gate = circ_.gates[k];
    CMat gm = gate_matrix(gate);
    apply_local_unitary_right(z, gm, gate.qubits, circ_.width);  // now M_k
    if (!by_gate[k].empty()) {
      CMat r = reduce_local(z, gate.qubits, circ_.width);
      for (auto [slot, pidx] : by_gate[k]) {
        CMat dg = dgate_matrix(gate, slot);
        cxd dtrace = dg.conjugate().cwiseProduct(r).sum();
        grad(pidx) = -2.0 * (gbar_over * dtrace).real();
      }
    }
    apply_local_unitary(z, gm.adjoint(), gate.qubits, circ_.width);
  }
  return f;
}

OptimizeResult minimize_lbfgs(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>& fg,
    Eigen::VectorXd x0, const LbfgsOptions& opts) {
  using Eigen::VectorXd;
  const int n = int(x0.size());
  OptimizeResult res;
  res.x = std::move(x0);
  if (n == 0) {
    res.f = fg(res.x, nullptr);
    res.converged = true;
    return res;
  }

  VectorXd g(n);
  double f = fg(res.x, &g);
  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    double gnorm = g.norm();
    if (gnorm <= opts.grad_tol) {
      res.converged = true;
      break;
    }

    // two-loop recursion
    VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    VectorXd dir = -q;
    double dg = g.dot(dir);
    if (dg >= 0) {  // not a descent direction; fall back to steepest descent
      dir = -g;
      dg = -gnorm * gnorm;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Armijo backtracking
    const double c1 = 1e-4;
    double step = 1.0;
    double fnew = f;
    VectorXd xnew;
    bool accepted = false;
    for (int ls = 0; ls < 48; ++ls) {
      xnew = res.x + step * dir;
      fnew = fg(xnew, nullptr);
      if (std::isfinite(fnew) && fnew <= f + c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled

    VectorXd gnew(n);
    fg(xnew, &gnew);
    VectorXd s = xnew - res.x;
    VectorXd y = gnew - g;
    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (int(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    res.x = std::move(xnew);
    f = fnew;
    g = std::move(gnew);
  }
  res.f = f;
  res.grad_norm = g.norm();
  res.iters = iter;
  if (res.grad_norm <= opts.grad_tol) res.converged = true;
  return res;
}

}  // namespace ensc
