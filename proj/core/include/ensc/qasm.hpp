#pragma once

#include <string>
#include <vector>

#include "ensc/circuit.hpp"

namespace ensc {

// OpenQASM 2.0 subset reader. Supported: the version line, include lines
// (ignored), exactly one qreg, optional cregs, the gate vocabulary of
// GateKind (u3, rz, h, s, sdg, t, tdg, x, y, z, cx), whole-register
// broadcast for single-qubit gates, barrier (no-op) and measure (skipped
// with a warning). Angle expressions understand numbers, pi, parentheses
// and + - * / with unary minus. Note: rz here is the symmetric rotation
// diag(e^{-i a/2}, e^{i a/2}), not the qelib1 phase gate.
//
// Anything else (gate definitions, classical control, reset, multiple
// qregs) raises ParseError with line/column info.
Circuit parse_qasm(const std::string& text,
                   std::vector<std::string>* warnings = nullptr);

// Deterministic emitter; angles are printed with 17 significant digits so a
// parse -> emit -> parse round trip reproduces every angle bit-for-bit (and
// at worst to 1e-12).
std::string emit_qasm(const Circuit& c);

}  // namespace ensc
