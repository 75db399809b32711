#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ensc/channel.hpp"
#include "ensc/circuit.hpp"
#include "ensc/ensemble.hpp"
#include "ensc/partition.hpp"

namespace ensc {

enum class PartitionerKind { Scan, Quick, Hier };

struct CompileConfig {
  std::string input_path;  // qasm file; mutually exclusive with benchmark
  std::string benchmark;   // "name:n:steps" (steps optional, default 1)
  GateSetProfile profile = GateSetProfile::NISQ;
  double eps2 = 1e-2;  // target squared error; eps = sqrt(eps2)
  int block_width = 4;
  PartitionerKind partitioner = PartitionerKind::Scan;
  int diversify_count = 8;
  int variant_cap = 64;
  int restarts = 8;
  int t_cap = 40;
  uint64_t seed = 1;
  int workers = 0;      // 0 = hardware concurrency
  std::string out_dir;  // empty = nothing written to disk
};

// Per-block line of the compile report. reference_expensive is the cost the
// block would pay without the ensemble: its own cnot count under NISQ, the
// eps^2/n_z-budget T count of its rz gates (plus literal T gates) under FT.
struct BlockSummary {
  int index = 0;
  int width = 0;
  int member_count = 0;
  double wee = 0.0;
  double bias = 0.0;
  double gamma = 0.0;
  double gamma_b = 0.0;
  bool accepted = false;
  double expected_expensive = 0.0;  // sum_i p_i count_i
  double reference_expensive = 0.0;
  std::string note;  // fallback reason; empty when the ensemble went through
};

struct CompileResult {
  CircuitDistribution dist;
  ChannelReport channel;  // observable_err / max_trace_dist are -1 when the
                          // register is too wide for exact evaluation
  std::vector<BlockSummary> blocks;
  double expected_expensive = 0.0;
  double reference_expensive = 0.0;
  int accepted_count = 0;
  std::string ensemble_json;
  std::vector<std::string> warnings;
};

// Resolves cfg to a circuit: parses input_path or generates the named
// benchmark ("name:n:steps"; seed feeds the generator).
Circuit load_input(const CompileConfig& cfg,
                   std::vector<std::string>* warnings = nullptr);

// Full pipeline: load, (FT: expand to Clifford+rz), partition, then per
// block synthesize / diversify / weight / filter with singleton fallback on
// any stage failure. Deterministic for a fixed cfg, independent of worker
// count. Writes ensemble.json under cfg.out_dir when set.
CompileResult compile(const CompileConfig& cfg);

// sum_{i<n-1} Z_i Z_{i+1} on n qubits (Z_0 when n == 1); the default
// reporting observable.
CMat zz_chain_observable(int n);

// CSV emitters. All doubles print with %.17g so outputs are byte-stable.
struct TableRow {
  std::string benchmark;
  GateSetProfile profile = GateSetProfile::NISQ;
  double eps2 = 0.0;
  double reference = 0.0;
  double expected = 0.0;
};

std::string tables_csv(const std::vector<TableRow>& rows);

struct ScalingRow {
  std::string benchmark;
  GateSetProfile profile = GateSetProfile::NISQ;
  double eps2 = 0.0;
  int blocks = 0;
  double wee_total = 0.0;
  double observable_err = 0.0;
  double max_trace_dist = 0.0;
};

// Adds the bound column K * eps^2 next to the measured values.
std::string scaling_csv(const std::vector<ScalingRow>& rows);

std::string convergence_csv(const std::string& benchmark,
                            const std::vector<ConvergenceRow>& rows);

const char* partitioner_name(PartitionerKind p);

}  // namespace ensc
