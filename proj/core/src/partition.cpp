#include "ensc/partition.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ensc {

namespace {

int max_arity(const Circuit& c) {
  int m = 1;
  for (const auto& g : c.gates) m = std::max(m, int(g.qubits.size()));
  return m;
}

Block make_block(const Circuit& c, const std::vector<size_t>& gate_idx) {
  std::set<int> touched;
  for (size_t gi : gate_idx)
    for (int q : c.gates[gi].qubits) touched.insert(q);
  Block b;
  b.qubit_map.assign(touched.begin(), touched.end());
  std::map<int, int> local;
  for (size_t k = 0; k < b.qubit_map.size(); ++k) local[b.qubit_map[k]] = int(k);
  b.circuit = Circuit(int(b.qubit_map.size()));
  for (size_t gi : gate_idx) {
    Gate g = c.gates[gi];
    for (int& q : g.qubits) q = local[q];
    b.circuit.add(std::move(g));
  }
  return b;
}

// Per-qubit chains of gate indices; a gate is frontier-ready for a qubit set
// S when it is the next unassigned gate on every one of its qubits and those
// qubits all lie in S.
struct Frontier {
  std::vector<std::vector<size_t>> chain;   // per qubit, gate indices in order
  std::vector<size_t> pos;                  // per qubit, next unassigned slot

  explicit Frontier(const Circuit& c)
      : chain(c.width), pos(c.width, 0) {
    for (size_t i = 0; i < c.gates.size(); ++i)
      for (int q : c.gates[i].qubits) chain[q].push_back(i);
  }

  bool done(const Circuit& c, size_t assigned) const {
    return assigned == c.gates.size();
  }
};

// Absorb the maximal prefix closure of gates inside subset S. Returns the
// absorbed gate indices in topological order; pos is advanced only when
// commit is true.
std::vector<size_t> absorb(const Circuit& c, Frontier& f,
                           const std::vector<int>& subset, bool commit) {
  std::vector<size_t> local_pos(f.pos);
  std::vector<char> in_subset(c.width, 0);
  for (int q : subset) in_subset[q] = 1;
  std::vector<size_t> taken;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int q : subset) {
      while (local_pos[q] < f.chain[q].size()) {
        size_t gi = f.chain[q][local_pos[q]];
        const Gate& g = c.gates[gi];
        bool ok = true;
        for (int gq : g.qubits) {
          if (!in_subset[gq] || f.chain[gq][local_pos[gq]] != gi) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
        for (int gq : g.qubits) ++local_pos[gq];
        taken.push_back(gi);
        progress = true;
      }
    }
  }
  std::sort(taken.begin(), taken.end());
  if (commit) f.pos = local_pos;
  return taken;
}

std::vector<std::vector<int>> candidate_subsets(const Circuit& c,
                                                const Frontier& f, int w) {
  // Candidate qubit pool: everything for small n, otherwise the qubits of
  // the next few unassigned gates (keeps the subset enumeration bounded on
  // wide circuits).
  std::vector<int> pool;
  if (c.width <= 24) {
    for (int q = 0; q < c.width; ++q) pool.push_back(q);
  } else {
    std::set<int> s;
    size_t budget = size_t(6) * size_t(w);
    for (size_t i = 0; i < c.gates.size() && s.size() < budget; ++i) {
      // cheap filter: a gate is unassigned iff it is still ahead of the
      // frontier position on its first qubit
      int q0 = c.gates[i].qubits[0];
      bool unassigned = false;
      for (size_t k = f.pos[q0]; k < f.chain[q0].size(); ++k)
        if (f.chain[q0][k] == i) {
          unassigned = true;
          break;
        }
      if (!unassigned) continue;
      for (int q : c.gates[i].qubits) s.insert(q);
    }
    for (int q = 0; q < c.width && s.size() < size_t(w); ++q) s.insert(q);
    pool.assign(s.begin(), s.end());
  }

  int k = std::min<int>(w, int(pool.size()));
  std::vector<std::vector<int>> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    out.push_back(std::move(subset));
    int i = k - 1;
    while (i >= 0 && idx[i] == int(pool.size()) - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

PartitionedCircuit scan_partition(const Circuit& c, int w) {
  if (w < max_arity(c))
    throw InputError("scan_partition: block width smaller than largest gate");
  PartitionedCircuit pc;
  pc.width = c.width;
  if (c.gates.empty()) return pc;

  Frontier f(c);
  size_t assigned = 0;
  while (assigned < c.gates.size()) {
    auto subsets = candidate_subsets(c, f, w);
    std::vector<int> best;
    size_t best_score = 0;
    int best_two = -1;
    for (auto& s : subsets) {
      auto taken = absorb(c, f, s, /*commit=*/false);
      if (taken.empty()) continue;
      int two = 0;
      for (size_t gi : taken)
        if (c.gates[gi].qubits.size() == 2) ++two;
      bool better = taken.size() > best_score ||
                    (taken.size() == best_score && two > best_two) ||
                    (taken.size() == best_score && two == best_two &&
                     (best.empty() || s < best));
      if (better) {
        best = s;
        best_score = taken.size();
        best_two = two;
      }
    }
    if (best.empty())
      throw InputError("scan_partition: no subset can absorb the frontier");
    auto taken = absorb(c, f, best, /*commit=*/true);
    assigned += taken.size();
    pc.blocks.push_back(make_block(c, taken));
  }
  return pc;
}

PartitionedCircuit quick_partition(const Circuit& c, int w) {
  if (w < max_arity(c))
    throw InputError("quick_partition: block width smaller than largest gate");
  PartitionedCircuit pc;
  pc.width = c.width;

  struct Bin {
    std::set<int> qubits;
    std::vector<size_t> gates;
  };
  std::vector<Bin> open;                 // in open order
  std::vector<int> owner(c.width, -1);   // open-bin index per qubit, -1 free

  auto close_bin = [&](size_t bi) {
    pc.blocks.push_back(make_block(c, open[bi].gates));
    for (int q : open[bi].qubits) owner[q] = -1;
  };

  for (size_t gi = 0; gi < c.gates.size(); ++gi) {
    const Gate& g = c.gates[gi];
    int joined = -1;
    for (size_t bi = 0; bi < open.size(); ++bi) {
      auto& bin = open[bi];
      std::set<int> grown = bin.qubits;
      bool ok = true;
      for (int q : g.qubits) {
        if (bin.qubits.count(q)) continue;
        if (owner[q] != -1) {  // owned by a different open bin
          ok = false;
          break;
        }
        grown.insert(q);
      }
      if (ok && int(grown.size()) <= w) {
        for (int q : g.qubits)
          if (!bin.qubits.count(q)) owner[q] = int(bi);
        bin.qubits = std::move(grown);
        bin.gates.push_back(gi);
        joined = int(bi);
        break;
      }
    }
    if (joined >= 0) continue;

    // close every bin owning one of g's qubits, in open order
    std::vector<size_t> to_close;
    for (size_t bi = 0; bi < open.size(); ++bi)
      for (int q : g.qubits)
        if (open[bi].qubits.count(q)) {
          to_close.push_back(bi);
          break;
        }
    for (size_t bi : to_close) close_bin(bi);
    // compact the open list, fixing owner indices
    std::vector<Bin> kept;
    for (size_t bi = 0; bi < open.size(); ++bi) {
      if (std::find(to_close.begin(), to_close.end(), bi) != to_close.end())
        continue;
      for (int q : open[bi].qubits) owner[q] = int(kept.size());
      kept.push_back(std::move(open[bi]));
    }
    open = std::move(kept);

    Bin fresh;
    for (int q : g.qubits) fresh.qubits.insert(q);
    fresh.gates.push_back(gi);
    for (int q : g.qubits) owner[q] = int(open.size());
    open.push_back(std::move(fresh));
  }
  for (size_t bi = 0; bi < open.size(); ++bi) close_bin(bi);
  return pc;
}

PartitionedCircuit hierarchical_partition(const Circuit& c, int w_outer,
                                          int w) {
  if (w_outer < w)
    throw InputError("hierarchical_partition: w_outer must be >= w");
  PartitionedCircuit outer = quick_partition(c, w_outer);
  PartitionedCircuit pc;
  pc.width = c.width;
  for (const auto& ob : outer.blocks) {
    PartitionedCircuit inner = scan_partition(ob.circuit, w);
    for (auto& ib : inner.blocks) {
      Block b;
      for (int lq : ib.qubit_map) b.qubit_map.push_back(ob.qubit_map[lq]);
      // inner qubit_map is ascending in the outer block's local indexing and
      // the outer map is ascending, so the composed map stays ascending.
      b.circuit = std::move(ib.circuit);
      pc.blocks.push_back(std::move(b));
    }
  }
  return pc;
}

UnitaryMatrix reconstruct_unitary(const PartitionedCircuit& pc) {
  if (pc.width > kMaxUnitaryWidth)
    throw CapacityError("reconstruct_unitary: width exceeds dense cap");
  Eigen::Index d = Eigen::Index(1) << pc.width;
  CMat m = CMat::Identity(d, d);
  for (const auto& b : pc.blocks) {
    CMat ub = unitary(b.circuit).mat();
    apply_local_unitary(m, ub, b.qubit_map, pc.width);
  }
  return UnitaryMatrix(std::move(m), /*validate=*/false);
}

}  // namespace ensc
