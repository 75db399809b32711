#include "ensc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ensc/errors.hpp"
#include "ensc/rng.hpp"

namespace ensc {

Circuit AnsatzTemplate::skeleton() const {
  Circuit c;
  c.width = width;
  for (int q = 0; q < width; ++q) c.add(Gate::u3(q, 0, 0, 0));
  for (const auto& [a, b] : cnot_layout) {
    c.add(Gate::cnot(a, b));
    c.add(Gate::u3(a, 0, 0, 0));
    c.add(Gate::u3(b, 0, 0, 0));
  }
  return c;
}

std::vector<ParamRef> AnsatzTemplate::param_refs() const {
  std::vector<ParamRef> refs;
  size_t gi = 0;
  for (int q = 0; q < width; ++q, ++gi)
    for (int s = 0; s < 3; ++s) refs.push_back({gi, s});
  for (size_t c = 0; c < cnot_layout.size(); ++c) {
    ++gi;  // the cnot itself
    for (int g = 0; g < 2; ++g, ++gi)
      for (int s = 0; s < 3; ++s) refs.push_back({gi, s});
  }
  return refs;
}

std::vector<std::vector<std::pair<int, int>>> cnot_layouts(int width,
                                                           int count, int cap,
                                                           uint64_t seed) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < width; ++i)
    for (int j = i + 1; j < width; ++j) pairs.push_back({i, j});

  std::vector<std::vector<std::pair<int, int>>> out;
  if (count == 0) {
    out.push_back({});
    return out;
  }
  if (pairs.empty()) return out;

  std::vector<int> idx(count, 0);
  while (true) {
    std::vector<std::pair<int, int>> layout;
    layout.reserve(count);
    for (int i : idx) layout.push_back(pairs[size_t(i)]);
    out.push_back(std::move(layout));
    int pos = count - 1;
    while (pos >= 0 && idx[size_t(pos)] == int(pairs.size()) - 1) {
      idx[size_t(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[size_t(pos)];
  }

  if (cap > 0 && int(out.size()) > cap) {
    auto rng = make_rng(derive_seed(seed, 0x1a70, uint64_t(count)));
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(size_t(cap));
  }
  return out;
}

std::optional<SynthesisResult> instantiate(const AnsatzTemplate& t,
                                           const CMat& v, double eps,
                                           uint64_t seed, int restarts) {
  if ((Eigen::Index(1) << t.width) != v.rows() || v.rows() != v.cols())
    throw InputError("instantiate: template width does not match target");

  CircuitObjective obj(t.skeleton(), t.param_refs(), v);
  auto fg = [&obj](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) return obj.value_and_grad(x, *g);
    return obj.value(x);
  };

  LbfgsOptions opts;
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(obj.dim());
    if (r > 0) {
      auto rng = make_rng(derive_seed(seed, uint64_t(r)));
      for (int i = 0; i < obj.dim(); ++i)
        x0(i) = (2.0 * uniform01(rng) - 1.0) * M_PI;
    }
    auto res = minimize_lbfgs(fg, x0, opts);
    if (res.f < best_f) {
      best_f = res.f;
      best_x = res.x;
    }
    if (CircuitObjective::error_from_value(best_f) <= 0.1 * eps) break;
  }

  obj.set_params(best_x);
  Circuit circ = obj.circuit();
  CMat u = unitary(circ).mat();
  auto [aligned, phi] = phase_align(u, v);
  double err = (aligned - v).norm();  // never trust the optimizer's value
  if (!(err <= eps)) return std::nullopt;

  SynthesisResult out;
  out.circuit = std::move(circ);
  out.unitary = std::move(aligned);
  out.e_i = err;
  out.expensive_count = int(t.cnot_layout.size());
  out.phase = phi;
  return out;
}

std::vector<SynthesisResult> synthesize_block(const CMat& v,
                                              GateSetProfile profile,
                                              double eps,
                                              int original_expensive,
                                              uint64_t seed, int restarts) {
  (void)profile;  // counting convention only; templates are cnot+u3
  if (v.rows() != v.cols() || !is_power_of_two(v.rows()))
    throw InputError("synthesize_block: bad target dimension");
  int width = 0;
  while ((Eigen::Index(1) << width) < v.rows()) ++width;
  if (width < 1) width = 1;

  constexpr int kLayoutCap = 24;
  constexpr size_t kEnough = 12;
  std::vector<SynthesisResult> out;
  int first_success = -1;
  for (int count = 0; count < original_expensive; ++count) {
    auto layouts =
        cnot_layouts(width, count, kLayoutCap, derive_seed(seed, 0x51));
    for (size_t li = 0; li < layouts.size(); ++li) {
      AnsatzTemplate t{width, layouts[li]};
      auto r = instantiate(t, v, eps,
                           derive_seed(seed, uint64_t(count), uint64_t(li)),
                           restarts);
      if (r) out.push_back(std::move(*r));
    }
    if (first_success < 0 && !out.empty()) first_success = count;
    if (first_success >= 0 && count > first_success && out.size() >= kEnough)
      break;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.expensive_count != b.expensive_count)
      return a.expensive_count < b.expensive_count;
    return a.e_i < b.e_i;
  });
  return out;
}

Circuit ntro_pass(const Circuit& c, const CMat& v, double eps) {
  if (count_rz(c) == 0) throw InputError("ntro_pass: circuit has no rz gates");
  {
    CMat u = unitary(c).mat();
    auto [aligned, phi] = phase_align(u, v);
    (void)phi;
    if ((aligned - v).norm() > eps + 1e-9)
      throw InputError("ntro_pass: input already violates the error bound");
  }

  constexpr double kCliffTol = 1e-9;
  Circuit cur = c;

  // Candidate rz gates, nearest-to-Clifford first.
  std::vector<std::pair<double, size_t>> order;
  for (size_t i = 0; i < cur.gates.size(); ++i) {
    if (cur.gates[i].kind != GateKind::RZ) continue;
    double dist = std::abs(std::remainder(cur.gates[i].params[0], M_PI_2));
    if (dist > kCliffTol) order.push_back({dist, i});
  }
  std::sort(order.begin(), order.end());

  std::vector<char> snapped(cur.gates.size(), 0);
  auto free_refs = [&](size_t excluding) {
    std::vector<ParamRef> refs;
    for (size_t i = 0; i < cur.gates.size(); ++i) {
      if (i == excluding || snapped[i]) continue;
      const Gate& g = cur.gates[i];
      if (g.kind == GateKind::RZ) {
        if (std::abs(std::remainder(g.params[0], M_PI_2)) <= kCliffTol)
          continue;  // already Clifford, keep it there
        refs.push_back({i, 0});
      } else if (g.kind == GateKind::U3) {
        for (int s = 0; s < 3; ++s) refs.push_back({i, s});
      }
    }
    return refs;
  };

  for (const auto& [dist, gi] : order) {
    (void)dist;
    Circuit trial = cur;
    double th = trial.gates[gi].params[0];
    trial.gates[gi].params[0] = th - std::remainder(th, M_PI_2);

    CircuitObjective obj(trial, free_refs(gi), v);
    auto fg = [&obj](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
      if (g) return obj.value_and_grad(x, *g);
      return obj.value(x);
    };
    LbfgsOptions opts;
    opts.max_iters = 500;
    auto res = minimize_lbfgs(fg, obj.get_params(), opts);
    if (CircuitObjective::error_from_value(res.f) <= eps) {
      obj.set_params(res.x);
      cur = obj.circuit();
      snapped[gi] = 1;
    }
  }
  return cur;
}

double ft_error_budget(int n_z, double eps, bool reference) {
  if (n_z < 1) throw InputError("ft_error_budget: n_z must be positive");
  return (reference ? eps * eps : eps) / double(n_z);
}

}  // namespace ensc
