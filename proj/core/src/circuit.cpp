#include "ensc/circuit.hpp"

#include <cmath>
#include <numbers>

namespace ensc {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::U3: return "u3";
    case GateKind::RZ: return "rz";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::CNOT: return "cx";
  }
  return "?";
}

int gate_arity(GateKind k) { return k == GateKind::CNOT ? 2 : 1; }

int gate_param_count(GateKind k) {
  switch (k) {
    case GateKind::U3: return 3;
    case GateKind::RZ: return 1;
    default: return 0;
  }
}

CMat gate_matrix(const Gate& g) {
  using std::numbers::pi;
  const cxd i1(0.0, 1.0);
  switch (g.kind) {
    case GateKind::U3: {
      double th = g.params[0], ph = g.params[1], la = g.params[2];
      double c = std::cos(th / 2), s = std::sin(th / 2);
      CMat m(2, 2);
      m << c, -std::polar(1.0, la) * s,
           std::polar(1.0, ph) * s, std::polar(1.0, ph + la) * c;
      return m;
    }
    case GateKind::RZ: {
      double th = g.params[0];
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = std::polar(1.0, -th / 2);
      m(1, 1) = std::polar(1.0, th / 2);
      return m;
    }
    case GateKind::H: {
      CMat m(2, 2);
      double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      return m;
    }
    case GateKind::S: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0; m(1, 1) = i1;
      return m;
    }
    case GateKind::Sdg: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0; m(1, 1) = -i1;
      return m;
    }
    case GateKind::T: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0; m(1, 1) = std::polar(1.0, pi / 4);
      return m;
    }
    case GateKind::Tdg: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0; m(1, 1) = std::polar(1.0, -pi / 4);
      return m;
    }
    case GateKind::X: {
      CMat m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::Y: {
      CMat m(2, 2);
      m << cxd(0, 0), -i1, i1, cxd(0, 0);
      return m;
    }
    case GateKind::Z: {
      CMat m = CMat::Zero(2, 2);
      m(0, 0) = 1.0; m(1, 1) = -1.0;
      return m;
    }
    case GateKind::CNOT: {
      // Basis order |t c> with qubit 0 least significant: if the gate is
      // cx(c=0, t=1) the matrix permutes |01> <-> |11>. Built generically by
      // the caller through apply_gate; here we return the 4x4 for the local
      // ordering qubits = {control, target} = {bit 0, bit 1}.
      CMat m = CMat::Zero(4, 4);
      m(0, 0) = 1.0;        // |00>
      m(3, 1) = 1.0;        // |01> (control set) -> |11>
      m(2, 2) = 1.0;        // |10>
      m(1, 3) = 1.0;        // |11> -> |01>
      return m;
    }
  }
  throw InputError("gate_matrix: unknown gate");
}

Circuit& Circuit::add(Gate g) {
  if (int(g.qubits.size()) != gate_arity(g.kind))
    throw InputError("Circuit::add: wrong qubit count for gate");
  if (int(g.params.size()) != gate_param_count(g.kind))
    throw InputError("Circuit::add: wrong parameter count for gate");
  for (int q : g.qubits)
    if (q < 0 || q >= width)
      throw InputError("Circuit::add: qubit index out of range");
  if (g.kind == GateKind::CNOT && g.qubits[0] == g.qubits[1])
    throw InputError("Circuit::add: CNOT control == target");
  gates.push_back(std::move(g));
  return *this;
}

int count_expensive(const Circuit& c, GateSetProfile p) {
  int n = 0;
  for (const auto& g : c.gates) {
    if (p == GateSetProfile::NISQ && g.kind == GateKind::CNOT) ++n;
    if (p == GateSetProfile::FT &&
        (g.kind == GateKind::T || g.kind == GateKind::Tdg))
      ++n;
  }
  return n;
}

int count_rz(const Circuit& c) {
  int n = 0;
  for (const auto& g : c.gates)
    if (g.kind == GateKind::RZ) ++n;
  return n;
}

int count_non_clifford_rz(const Circuit& c, double tol) {
  using std::numbers::pi;
  int n = 0;
  for (const auto& g : c.gates) {
    if (g.kind != GateKind::RZ) continue;
    double th = g.params[0];
    double r = std::remainder(th, pi / 2);
    if (std::abs(r) > tol) ++n;
  }
  return n;
}

const char* profile_name(GateSetProfile p) {
  return p == GateSetProfile::NISQ ? "nisq" : "ft";
}

void apply_gate(CMat& state, const Gate& g, int width) {
  if (g.kind == GateKind::CNOT) {
    int c = g.qubits[0], t = g.qubits[1];
    Eigen::Index d = Eigen::Index(1) << width;
    Eigen::Index cm = Eigen::Index(1) << c, tm = Eigen::Index(1) << t;
    for (Eigen::Index b = 0; b < d; ++b) {
      if ((b & cm) && !(b & tm)) state.row(b).swap(state.row(b | tm));
    }
    return;
  }
  CMat u = gate_matrix(g);
  apply_local_unitary(state, u, g.qubits, width);
}

void apply_local_unitary(CMat& state, const CMat& u,
                         const std::vector<int>& qubits, int width) {
  int k = int(qubits.size());
  Eigen::Index dk = Eigen::Index(1) << k;
  if (u.rows() != dk || u.cols() != dk)
    throw InputError("apply_local_unitary: operator size does not match qubits");
  Eigen::Index d = Eigen::Index(1) << width;
  if (state.rows() != d)
    throw InputError("apply_local_unitary: state size mismatch");
  for (int q : qubits)
    if (q < 0 || q >= width)
      throw InputError("apply_local_unitary: qubit out of range");

  std::vector<Eigen::Index> masks(k);
  for (int j = 0; j < k; ++j) masks[j] = Eigen::Index(1) << qubits[j];
  Eigen::Index rest_mask = d - 1;
  for (auto m : masks) rest_mask &= ~m;

  CVec scratch(dk);
  for (Eigen::Index col = 0; col < state.cols(); ++col) {
    // Iterate over assignments of the untouched qubits.
    Eigen::Index base = 0;
    while (true) {
      // Gather the fiber, apply u, scatter back.
      for (Eigen::Index a = 0; a < dk; ++a) {
        Eigen::Index idx = base;
        for (int j = 0; j < k; ++j)
          if (a & (Eigen::Index(1) << j)) idx |= masks[j];
        scratch(a) = state(idx, col);
      }
      for (Eigen::Index a = 0; a < dk; ++a) {
        Eigen::Index idx = base;
        for (int j = 0; j < k; ++j)
          if (a & (Eigen::Index(1) << j)) idx |= masks[j];
        cxd acc(0.0, 0.0);
        for (Eigen::Index b = 0; b < dk; ++b) acc += u(a, b) * scratch(b);
        state(idx, col) = acc;
      }
      // Next assignment of the untouched bits (carry trick over rest_mask).
      base = (base - rest_mask) & rest_mask;
      if (base == 0) break;
    }
  }
}

CMat embed_unitary(const CMat& u, const std::vector<int>& qubits, int width) {
  Eigen::Index d = Eigen::Index(1) << width;
  CMat m = CMat::Identity(d, d);
  apply_local_unitary(m, u, qubits, width);
  return m;
}

UnitaryMatrix unitary(const Circuit& c) {
  if (c.width < 1) throw InputError("unitary: empty circuit width");
  if (c.width > kMaxUnitaryWidth)
    throw CapacityError("unitary: width " + std::to_string(c.width) +
                        " exceeds the dense cap of " +
                        std::to_string(kMaxUnitaryWidth));
  Eigen::Index d = Eigen::Index(1) << c.width;
  CMat m = CMat::Identity(d, d);
  for (const auto& g : c.gates) apply_gate(m, g, c.width);
  return UnitaryMatrix(std::move(m), /*validate=*/false);
}

}  // namespace ensc
