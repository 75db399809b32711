#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ensc/linalg.hpp"

namespace ensc {

// Gate vocabulary: one continuously parameterized single-qubit gate per
// architecture family (U3 / RZ), the common discrete single-qubit gates, and
// CNOT. Qubit 0 is the least significant bit of a basis-state index.
enum class GateKind : std::uint8_t {
  U3,    // params theta, phi, lambda
  RZ,    // param theta; matrix diag(e^{-i theta/2}, e^{i theta/2})
  H,
  S,
  Sdg,
  T,
  Tdg,
  X,
  Y,
  Z,
  CNOT,  // qubits[0] = control, qubits[1] = target
};

const char* gate_name(GateKind k);
int gate_arity(GateKind k);
int gate_param_count(GateKind k);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<double> params;

  static Gate u3(int q, double theta, double phi, double lambda) {
    return {GateKind::U3, {q}, {theta, phi, lambda}};
  }
  static Gate rz(int q, double theta) { return {GateKind::RZ, {q}, {theta}}; }
  static Gate h(int q) { return {GateKind::H, {q}, {}}; }
  static Gate s(int q) { return {GateKind::S, {q}, {}}; }
  static Gate sdg(int q) { return {GateKind::Sdg, {q}, {}}; }
  static Gate t(int q) { return {GateKind::T, {q}, {}}; }
  static Gate tdg(int q) { return {GateKind::Tdg, {q}, {}}; }
  static Gate x(int q) { return {GateKind::X, {q}, {}}; }
  static Gate y(int q) { return {GateKind::Y, {q}, {}}; }
  static Gate z(int q) { return {GateKind::Z, {q}, {}}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t}, {}}; }
};

// 2x2 (or 4x4 for CNOT) matrix of a gate, in the little-endian convention.
CMat gate_matrix(const Gate& g);

struct Circuit {
  int width = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int w) : width(w) {}

  Circuit& add(Gate g);
  size_t size() const { return gates.size(); }
};

// Architecture profiles. The expensive gate drives resource accounting:
// CNOT on noisy hardware, T (from RZ synthesis) on fault-tolerant hardware.
enum class GateSetProfile { NISQ, FT };

const char* profile_name(GateSetProfile p);

// Exact count of expensive gates already present in the circuit:
// NISQ -> CNOT count, FT -> T + Tdg count. RZ gates in an FT circuit are not
// yet lowered and are therefore counted separately via count_rz /
// count_non_clifford_rz.
int count_expensive(const Circuit& c, GateSetProfile p);
int count_rz(const Circuit& c);
// RZ gates whose angle is not a multiple of pi/2 (mod 2*pi) within tol.
int count_non_clifford_rz(const Circuit& c, double tol = 1e-9);

// Hard cap for dense unitary evaluation.
inline constexpr int kMaxUnitaryWidth = 10;

// Full 2^width unitary of the circuit, gates applied in list order.
UnitaryMatrix unitary(const Circuit& c);

// Apply gate g (little-endian) to every column of state, in place. state has
// 2^width rows; the number of columns is arbitrary (states or matrices).
void apply_gate(CMat& state, const Gate& g, int width);

// Apply a k-qubit operator u (2^k x 2^k) on the given qubits (little-endian
// significance order: qubits[0] is the least significant local index) to every
// column of state.
void apply_local_unitary(CMat& state, const CMat& u,
                         const std::vector<int>& qubits, int width);

// Embed a k-qubit operator on the given qubits of a width-qubit register as a
// dense 2^width unitary.
CMat embed_unitary(const CMat& u, const std::vector<int>& qubits, int width);

}  // namespace ensc
