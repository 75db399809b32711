#pragma once

#include <vector>

#include "ensc/circuit.hpp"

namespace ensc {

// A contiguous-in-dependency-order group of gates acting on at most w qubits.
// qubit_map lists the touched global qubits in ascending order; circuit is
// expressed over local indices 0..qubit_map.size()-1, where local index k
// corresponds to global qubit qubit_map[k].
struct Block {
  std::vector<int> qubit_map;
  Circuit circuit;
};

struct PartitionedCircuit {
  int width = 0;
  std::vector<Block> blocks;
};

// Greedy frontier partitioner: repeatedly scores every candidate w-qubit
// subset by how many frontier gates it can absorb (ties: more two-qubit
// gates, then lexicographically smallest subset) and absorbs the winner's
// gates as one block.
PartitionedCircuit scan_partition(const Circuit& c, int w);

// Single topological pass over the gates with open bins of at most w qubits.
// A gate joins the first open bin it fits into (possibly growing the bin with
// qubits no other open bin owns); otherwise every bin owning one of its
// qubits is closed and a fresh bin is opened. Emission order = close order.
PartitionedCircuit quick_partition(const Circuit& c, int w);

// quick_partition at w_outer, then scan_partition at w inside each outer
// block. Requires w_outer >= w.
PartitionedCircuit hierarchical_partition(const Circuit& c, int w_outer, int w);

// Multiply the embedded block unitaries back together (width <= 10); used to
// check that a partition reproduces the original circuit.
UnitaryMatrix reconstruct_unitary(const PartitionedCircuit& pc);

}  // namespace ensc
