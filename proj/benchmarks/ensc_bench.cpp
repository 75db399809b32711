#include <benchmark/benchmark.h>

#include "ensc/channel.hpp"
#include "ensc/circuit.hpp"
#include "ensc/clifford_t.hpp"
#include "ensc/ensemble.hpp"
#include "ensc/linalg.hpp"
#include "ensc/partition.hpp"
#include "ensc/rng.hpp"
#include "ensc/workflow.hpp"

namespace {

ensc::Circuit bench_circuit() {
  ensc::CompileConfig cfg;
  cfg.benchmark = "heisenberg:4:2";
  return ensc::load_input(cfg);
}

void BM_unitary_eval(benchmark::State& state) {
  ensc::Circuit c = bench_circuit();
  for (auto _ : state) {
    auto u = ensc::unitary(c);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_unitary_eval);

void BM_qp_solve(benchmark::State& state) {
  std::vector<ensc::CMat> members;
  auto rng = ensc::make_rng(7);
  ensc::CMat v = ensc::haar_unitary(4, rng);
  for (int i = 0; i < 4; ++i) members.push_back(ensc::haar_unitary(4, rng));
  ensc::QPProblem qp = ensc::build_qp(members, v);
  for (auto _ : state) {
    auto p = ensc::solve_simplex_qp(qp);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_qp_solve);

void BM_scan_partition(benchmark::State& state) {
  ensc::Circuit c = bench_circuit();
  for (auto _ : state) {
    auto pc = ensc::scan_partition(c, 2);
    benchmark::DoNotOptimize(pc);
  }
}
BENCHMARK(BM_scan_partition);

void BM_rz_word_search(benchmark::State& state) {
  // nudge the angle each iteration so the memo never answers
  int i = 0;
  for (auto _ : state) {
    auto words = ensc::rz_to_clifford_t(0.1 + 1e-9 * i++, 1e-2, 40, 8);
    benchmark::DoNotOptimize(words);
  }
}
BENCHMARK(BM_rz_word_search);

void BM_channel_apply(benchmark::State& state) {
  static const ensc::CompileResult res = [] {
    ensc::CompileConfig cfg;
    cfg.benchmark = "heisenberg:4:2";
    cfg.block_width = 2;
    cfg.eps2 = 1e-2;
    return ensc::compile(cfg);
  }();
  int dim = 1 << res.dist.width;
  ensc::CMat rho0 = ensc::CMat::Zero(dim, dim);
  rho0(0, 0) = 1.0;
  ensc::DensityMatrix rho(rho0);
  for (auto _ : state) {
    auto out = ensc::apply_ensemble_channel(res.dist, rho);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_channel_apply);

}  // namespace

BENCHMARK_MAIN();
