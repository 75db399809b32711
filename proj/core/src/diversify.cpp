#include "ensc/diversify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ensc/clifford_t.hpp"
#include "ensc/errors.hpp"
#include "ensc/rng.hpp"

namespace ensc {

namespace {

double wrap_pi(double x) {
  double r = std::remainder(x, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

}  // namespace

U3Angles rewrite_su2_as_u3(const CMat& m) {
  if (m.rows() != 2 || m.cols() != 2)
    throw InputError("rewrite_su2_as_u3: expected a 2x2 matrix");
  const cxd m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  const double c = std::abs(m00), s = std::abs(m10);
  U3Angles a;
  a.theta = 2.0 * std::atan2(s, c);
  if (s == 0.0) {
    // diagonal; the off-diagonal phases carry no information
    a.alpha = std::arg(m00);
    a.phi = wrap_pi(std::arg(m11) - a.alpha);
    a.lambda = 0.0;
    return a;
  }
  // When c == 0 the alpha read off m00 is arbitrary but multiplies a zero
  // cosine, so the reconstruction is still exact.
  a.alpha = std::arg(m00);
  a.phi = wrap_pi(std::arg(m10) - a.alpha);
  a.lambda = wrap_pi(std::arg(-m01) - a.alpha);
  return a;
}

PerturbationSpec make_perturbations(double eps_u3, int count, uint64_t seed) {
  if (eps_u3 < 0) throw InputError("make_perturbations: negative budget");
  PerturbationSpec spec;
  spec.eps_u3 = eps_u3;
  auto rng = make_rng(derive_seed(seed, 0xd17));
  for (int k = 0; k < count / 2; ++k) {
    std::array<double, 3> d{};
    double n = 0.0;
    do {
      for (auto& x : d) x = normal01(rng);
      n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    } while (n < 1e-6);
    for (auto& x : d) x *= eps_u3 / n;
    spec.directions.push_back(d);
    spec.directions.push_back({-d[0], -d[1], -d[2]});
  }
  return spec;
}

std::vector<SynthesisResult> diversify_nisq(const SynthesisResult& result,
                                            const CMat& v, double eps,
                                            int count, uint64_t seed,
                                            int* discarded) {
  if (discarded) *discarded = 0;
  int n_u = 0;
  for (const auto& g : result.circuit.gates)
    if (g.kind == GateKind::U3) ++n_u;
  if (n_u == 0) return {result};
  if (!(result.e_i <= eps + 1e-12))
    throw InputError("diversify_nisq: member exceeds the error budget");

  const double eps_u3 = std::max(0.0, (eps - result.e_i) / double(n_u));
  PerturbationSpec spec = make_perturbations(eps_u3, count, seed);

  std::vector<SynthesisResult> out;
  out.reserve(spec.directions.size());
  for (const auto& d : spec.directions) {
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (r == 0.0) {
      out.push_back(result);  // no slack left, keep the member as is
      continue;
    }
    CMat p(2, 2);
    p << cxd(d[2], 0), cxd(d[0], -d[1]), cxd(d[0], d[1]), cxd(-d[2], 0);
    CMat rot = std::cos(r) * CMat::Identity(2, 2) +
               cxd(0, 1) * (std::sin(r) / r) * p;

    Circuit variant = result.circuit;
    for (auto& g : variant.gates) {
      if (g.kind != GateKind::U3) continue;
      U3Angles ang = rewrite_su2_as_u3(gate_matrix(g) * rot);
      g.params = {ang.theta, ang.phi, ang.lambda};
    }
    CMat u = unitary(variant).mat();
    auto [aligned, phi] = phase_align(u, v);
    double err = (aligned - v).norm();
    if (!(err <= eps + 1e-9)) {
      if (discarded) ++(*discarded);
      continue;
    }
    SynthesisResult sr;
    sr.circuit = std::move(variant);
    sr.unitary = std::move(aligned);
    sr.e_i = err;
    sr.expensive_count = result.expensive_count;
    sr.phase = phi;
    out.push_back(std::move(sr));
  }
  return out;
}

namespace {

struct WordFit {
  double angle_err = 0.0;  // induced z-rotation angle minus the target
  double op_err = 0.0;     // phase-aligned operator distance to rz(theta)
};

WordFit fit_against(const CliffordTWord& w, double theta) {
  CMat u = word_unitary(w.gates);
  cxd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  CMat su = u / std::sqrt(det);
  double qw = 0.5 * (su(0, 0) + su(1, 1)).real();
  double qz = 0.5 * (su(1, 1) - su(0, 0)).imag();
  double ct = std::cos(theta / 2), st = std::sin(theta / 2);
  double rw = ct * qw + st * qz;
  double rz = ct * qz - st * qw;
  if (rw < 0) {
    rw = -rw;
    rz = -rz;
  }
  WordFit f;
  f.angle_err = 2.0 * std::atan2(rz, rw);
  f.op_err = std::sqrt(std::max(0.0, 2.0 - 2.0 * rw));
  return f;
}

constexpr double kExactAngle = 1e-13;

// Word pool for one rz. Words from offset queries are re-scored against the
// actual target angle before they enter the pool.
struct RzPool {
  std::vector<CliffordTWord> words;  // sorted by (t, error vs target)
  bool has_neg = false, has_pos = false, has_zero = false;

  bool straddles() const { return has_zero || (has_neg && has_pos); }

  void merge(std::vector<CliffordTWord> ws, double theta,
             std::set<std::vector<GateKind>>& seen) {
    for (auto& w : ws) {
      if (!seen.insert(w.gates).second) continue;
      WordFit f = fit_against(w, theta);
      w.error = f.op_err;
      if (std::abs(f.angle_err) <= kExactAngle)
        has_zero = true;
      else if (f.angle_err < 0)
        has_neg = true;
      else
        has_pos = true;
      words.push_back(std::move(w));
    }
  }
};

}  // namespace

std::vector<SynthesisResult> diversify_ft(const SynthesisResult& result,
                                          const CMat& v, double eps,
                                          double eps_rz, int t_cap,
                                          uint64_t seed, int variant_cap) {
  std::vector<size_t> rz_at;
  for (size_t i = 0; i < result.circuit.gates.size(); ++i)
    if (result.circuit.gates[i].kind == GateKind::RZ) rz_at.push_back(i);
  if (rz_at.empty()) throw InputError("diversify_ft: circuit has no rz gates");
  if (variant_cap < 1) throw InputError("diversify_ft: variant cap < 1");

  std::vector<std::vector<CliffordTWord>> cands(rz_at.size());
  for (size_t j = 0; j < rz_at.size(); ++j) {
    double theta = result.circuit.gates[rz_at[j]].params[0];
    auto center = rz_to_clifford_t(theta, eps_rz, t_cap);
    if (center.empty()) return {};  // not diversifiable at this budget

    if (std::abs(std::remainder(theta, M_PI_2)) <= 1e-9) {
      // Clifford angle: exact word, nothing to spread
      cands[j] = {center.front()};
      continue;
    }
    RzPool pool;
    std::set<std::vector<GateKind>> seen;
    pool.merge(std::move(center), theta, seen);
    double delta = eps_rz / 2;
    for (int k = 0; k < 3 && !pool.straddles(); ++k, delta *= 2) {
      pool.merge(rz_to_clifford_t(theta + delta, eps_rz, t_cap), theta, seen);
      pool.merge(rz_to_clifford_t(theta - delta, eps_rz, t_cap), theta, seen);
    }
    std::sort(pool.words.begin(), pool.words.end(),
              [](const auto& a, const auto& b) {
                if (a.t_count != b.t_count) return a.t_count < b.t_count;
                return a.error < b.error;
              });
    cands[j] = std::move(pool.words);
  }

  double total = 1.0;
  for (const auto& c : cands) total *= double(c.size());

  std::vector<std::vector<uint32_t>> picks;
  if (total <= double(variant_cap)) {
    std::vector<uint32_t> sel(cands.size(), 0);
    while (true) {
      picks.push_back(sel);
      size_t pos = 0;
      while (pos < sel.size() && ++sel[pos] == cands[pos].size()) {
        sel[pos] = 0;
        ++pos;
      }
      if (pos == sel.size()) break;
    }
  } else {
    // Minimum-T selection first, then single-slot bumps off it: they cost
    // almost nothing extra and give the weight optimizer opposite-sign
    // partners per rotation. Random picks fill the rest, biased toward the
    // cheap end of each pool.
    std::set<std::vector<uint32_t>> seen;
    std::vector<uint32_t> base(cands.size(), 0);
    seen.insert(base);
    picks.push_back(base);
    for (size_t j = 0; j < cands.size(); ++j) {
      if (int(picks.size()) >= variant_cap) break;
      for (uint32_t k = 1; k < cands[j].size() && k <= 3; ++k) {
        std::vector<uint32_t> sel = base;
        sel[j] = k;
        if (seen.insert(sel).second) picks.push_back(std::move(sel));
        if (int(picks.size()) >= variant_cap) break;
      }
    }
    auto rng = make_rng(derive_seed(seed, 0xf7d1));
    for (int attempt = 0; attempt < 8 * variant_cap; ++attempt) {
      if (int(picks.size()) >= variant_cap) break;
      std::vector<uint32_t> sel(cands.size());
      for (size_t j = 0; j < cands.size(); ++j) {
        const double u = uniform01(rng);
        sel[j] = std::min(uint32_t(cands[j].size()) - 1,
                          uint32_t(u * u * double(cands[j].size())));
      }
      if (seen.insert(sel).second) picks.push_back(std::move(sel));
    }
  }

  std::vector<SynthesisResult> out;
  for (const auto& sel : picks) {
    Circuit variant;
    variant.width = result.circuit.width;
    size_t j = 0;
    for (size_t i = 0; i < result.circuit.gates.size(); ++i) {
      const Gate& g = result.circuit.gates[i];
      if (g.kind != GateKind::RZ) {
        variant.add(g);
        continue;
      }
      const auto& w = cands[j][sel[j]];
      for (GateKind k : w.gates) variant.add(Gate{k, {g.qubits[0]}, {}});
      ++j;
    }
    CMat u = unitary(variant).mat();
    auto [aligned, phi] = phase_align(u, v);
    double err = (aligned - v).norm();
    if (!(err <= eps + 1e-9)) continue;
    SynthesisResult sr;
    sr.circuit = std::move(variant);
    sr.unitary = std::move(aligned);
    sr.e_i = err;
    sr.expensive_count = count_expensive(sr.circuit, GateSetProfile::FT);
    sr.phase = phi;
    out.push_back(std::move(sr));
  }
  return out;
}

}  // namespace ensc
