#pragma once

#include <cstdint>
#include <string>

#include "ensc/circuit.hpp"

namespace ensc {

// Built-in benchmark circuit generators.
//
//   heisenberg  n qubits, `steps` first-order Trotter steps of the open-chain
//               Heisenberg Hamiltonian H = J * sum_i (XiXi+1 + YiYi+1 + ZiZi+1)
//               with J = 1 and total evolution time 1.0, lowered to CNOT+U3.
//   qaoa_ring   p = `steps` layers of ring MaxCut QAOA on n qubits, emitted
//               over {H, CNOT, RZ}; angles drawn from `seed`.
//   qft_adder   Draper adder on n/2 + n/2 qubits (n even), emitted over
//               {H, CNOT, RZ}.
//
// `seed` only affects qaoa_ring.
Circuit benchmark_circuit(const std::string& name, int n, int steps,
                          std::uint64_t seed = 0);

}  // namespace ensc
