#include "ensc/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "ensc/benchmark_circuits.hpp"
#include "ensc/clifford_t.hpp"
#include "ensc/diversify.hpp"
#include "ensc/errors.hpp"
#include "ensc/qasm.hpp"
#include "ensc/rng.hpp"
#include "ensc/synth.hpp"

namespace ensc {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCliffTol = 1e-9;  // matches count_non_clifford_rz
constexpr int kChannelCap = 8;      // exact channel metrics, same cap as channel.cpp
constexpr int kLemma3Cap = 4;       // Choi eigenproblems are d^2 x d^2
constexpr double kReportDelta = 1e-2;

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)x);
  return buf;
}

// Content hash of a block-local circuit. Blocks hashing equal run the whole
// per-block pipeline once and share the result (their seeds derive from the
// hash, not the block position, so the outcome is placement independent).
uint64_t block_key(const Block& b) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  mix(uint64_t(b.circuit.width));
  for (const Gate& g : b.circuit.gates) {
    mix(uint64_t(g.kind) + 0x9e);
    for (int q : g.qubits) mix(uint64_t(q) + 1);
    for (double p : g.params) {
      uint64_t bits;
      std::memcpy(&bits, &p, sizeof bits);
      mix(bits);
    }
  }
  return h;
}

// Everything position independent that the per-block pipeline produces.
struct BlockWork {
  WeightedEnsemble ens;
  double reference = 0.0;
  double expected = 0.0;
  std::string note;
};

double expected_expensive(const WeightedEnsemble& ens) {
  double s = 0.0;
  for (const EnsembleMember& m : ens.members) s += m.weight * m.expensive_count;
  return s;
}

std::shared_ptr<const BlockWork> process_nisq(const CompileConfig& cfg,
                                              double eps, const Block& blk,
                                              uint64_t key) {
  auto w = std::make_shared<BlockWork>();
  const CMat v = unitary(blk.circuit).mat();
  const int ref = count_expensive(blk.circuit, GateSetProfile::NISQ);
  const uint64_t bseed = derive_seed(cfg.seed, 0x5e, key);
  w->reference = ref;

  if (ref == 0) {
    w->ens = singleton_ensemble(v, eps, blk, GateSetProfile::NISQ);
    w->note = "no expensive gates";
  } else {
    auto found = synthesize_block(v, GateSetProfile::NISQ, eps, ref, bseed,
                                  cfg.restarts);
    if (found.empty()) {
      w->ens = singleton_ensemble(v, eps, blk, GateSetProfile::NISQ);
      w->note = "no cheaper instantiation";
    } else {
      std::vector<SynthesisResult> pool = found;
      for (size_t j = 0; j < found.size(); ++j) {
        if (pool.size() >= size_t(cfg.variant_cap)) break;
        auto vars = diversify_nisq(found[j], v, eps, cfg.diversify_count,
                                   derive_seed(bseed, 0xd1, j));
        pool.insert(pool.end(), vars.begin(), vars.end());
      }
      if (pool.size() > size_t(cfg.variant_cap)) pool.resize(cfg.variant_cap);
      std::string fail;
      WeightedEnsemble ens;
      try {
        ens = make_weighted_ensemble(v, eps, std::move(pool));
      } catch (const QPFailure& e) {
        fail = std::string("qp: ") + e.what();
      }
      if (fail.empty()) {
        ens = filter_block(std::move(ens), blk, eps, GateSetProfile::NISQ);
        if (!ens.accepted) fail = "wee above threshold";
        w->ens = std::move(ens);
      } else {
        w->ens = singleton_ensemble(v, eps, blk, GateSetProfile::NISQ);
      }
      w->note = fail;
    }
  }
  w->expected = expected_expensive(w->ens);
  return w;
}

bool non_clifford_angle(double theta) {
  return std::abs(std::remainder(theta, kPi / 2)) > kCliffTol;
}

// One-member ensemble holding the reference lowering: every non-Clifford rz
// replaced by its eps^2/n_z-budget word. Used when no diversified variant
// survives; if even this sits above eps the block keeps its rz gates
// verbatim (exact, not executable on a bare Clifford+T machine, and flagged
// in the note).
WeightedEnsemble ft_reference_fallback(
    const Block& blk, const CMat& v,
    const std::vector<std::vector<GateKind>>& ref_words, double eps,
    std::string* note) {
  Circuit rc(blk.circuit.width);
  size_t wi = 0;
  for (const Gate& g : blk.circuit.gates) {
    if (g.kind == GateKind::RZ && non_clifford_angle(g.params[0])) {
      for (GateKind k : ref_words[wi]) rc.add(Gate{k, {g.qubits[0]}, {}});
      ++wi;
    } else {
      rc.add(g);
    }
  }
  CMat u = unitary(rc).mat();
  auto [aligned, phase] = phase_align(u, v);
  (void)phase;
  double err = (aligned - v).norm();
  if (err > eps) {
    *note += "; reference lowering above budget, kept verbatim";
    return singleton_ensemble(v, eps, blk, GateSetProfile::FT);
  }
  EnsembleMember m;
  m.circuit = std::move(rc);
  m.unitary = aligned;
  m.weight = 1.0;
  m.expensive_count = count_expensive(m.circuit, GateSetProfile::FT);
  m.e_i = err;
  WeightedEnsemble ens;
  ens.target = v;
  ens.eps = eps;
  ens.members = {std::move(m)};
  ens.wee = err;
  ens.bias = err;
  ens.gamma = err / (eps * eps);
  ens.gamma_b = ens.gamma;
  ens.accepted = false;
  return ens;
}

std::shared_ptr<const BlockWork> process_ft(const CompileConfig& cfg,
                                            double eps, int n_z,
                                            const Block& blk, uint64_t key) {
  auto w = std::make_shared<BlockWork>();
  const CMat v = unitary(blk.circuit).mat();
  const uint64_t bseed = derive_seed(cfg.seed, 0x5e, key);
  const int k_pre = count_non_clifford_rz(blk.circuit);
  const int literal_t = count_expensive(blk.circuit, GateSetProfile::FT);

  // Reference cost: lower each rz of the unsnapped block at budget
  // eps^2/n_z. Below the synthesizer's reachable accuracy the most accurate
  // word stands in, which only raises the reference.
  double t_ref = literal_t;
  std::vector<std::vector<GateKind>> ref_words;
  if (k_pre > 0) {
    const double ref_budget = ft_error_budget(n_z, eps, true);
    for (const Gate& g : blk.circuit.gates) {
      if (g.kind != GateKind::RZ || !non_clifford_angle(g.params[0])) continue;
      auto ws = rz_to_clifford_t(g.params[0], ref_budget, cfg.t_cap, 8);
      CliffordTWord word =
          ws.empty() ? best_word(g.params[0], cfg.t_cap) : ws.front();
      t_ref += word.t_count;
      ref_words.push_back(std::move(word.gates));
    }
  }
  w->reference = t_ref;

  if (k_pre == 0) {
    w->ens = singleton_ensemble(v, eps, blk, GateSetProfile::FT);
    w->note = "clifford block";
  } else {
    // Snap what the leftover budget allows, then diversify the rest.
    const double eps_ntro = eps * double(n_z - k_pre) / double(n_z);
    Circuit c2 = blk.circuit;
    if (eps_ntro > 1e-12) c2 = ntro_pass(blk.circuit, v, eps_ntro);
    SynthesisResult base;
    CMat u2 = unitary(c2).mat();
    auto [aligned, phase] = phase_align(u2, v);
    base.circuit = std::move(c2);
    base.unitary = aligned;
    base.phase = phase;
    base.e_i = (aligned - v).norm();
    base.expensive_count = count_expensive(base.circuit, GateSetProfile::FT);

    const double eps_rz = ft_error_budget(n_z, eps, false);
    auto vars = diversify_ft(base, v, eps, eps_rz, cfg.t_cap,
                             derive_seed(bseed, 0xf7), cfg.variant_cap);
    vars.erase(std::remove_if(vars.begin(), vars.end(),
                              [&](const SynthesisResult& r) {
                                return double(r.expensive_count) > t_ref;
                              }),
               vars.end());
    std::string fail;
    WeightedEnsemble ens;
    if (vars.empty()) {
      fail = "no variant within the reference budget";
    } else {
      try {
        ens = make_weighted_ensemble(v, eps, std::move(vars));
      } catch (const QPFailure& e) {
        fail = std::string("qp: ") + e.what();
      }
    }
    if (fail.empty()) {
      if (ens.wee <= filter_constant(eps) * eps * eps) {
        ens.accepted = true;
        w->ens = std::move(ens);
      } else {
        fail = "wee above threshold";
      }
    }
    if (!fail.empty())
      w->ens = ft_reference_fallback(blk, v, ref_words, eps, &fail);
    w->note = fail;
  }
  w->expected = expected_expensive(w->ens);
  return w;
}

nlohmann::ordered_json ensemble_json(const CompileConfig& cfg, double eps,
                                     const CompileResult& res,
                                     const std::vector<uint64_t>& keys) {
  nlohmann::ordered_json j;
  j["format"] = "ensemble-v1";
  j["source"] = cfg.benchmark.empty() ? cfg.input_path : cfg.benchmark;
  j["profile"] = profile_name(cfg.profile);
  j["eps2"] = cfg.eps2;
  j["eps"] = eps;
  j["width"] = res.dist.width;
  j["block_width"] = cfg.block_width;
  j["partitioner"] = partitioner_name(cfg.partitioner);
  j["seed"] = cfg.seed;
  j["reference_expensive"] = res.reference_expensive;
  j["expected_expensive"] = res.expected_expensive;
  j["wee_total"] = res.channel.wee_total;
  auto blocks = nlohmann::ordered_json::array();
  for (size_t i = 0; i < res.dist.blocks.size(); ++i) {
    const DistBlock& db = res.dist.blocks[i];
    const BlockSummary& bs = res.blocks[i];
    nlohmann::ordered_json b;
    b["index"] = bs.index;
    b["qubits"] = db.qubit_map;
    b["block_hash"] = hex64(keys[i]);
    b["accepted"] = bs.accepted;
    b["wee"] = bs.wee;
    b["bias"] = bs.bias;
    b["gamma"] = bs.gamma;
    b["gamma_b"] = bs.gamma_b;
    b["reference_expensive"] = bs.reference_expensive;
    b["expected_expensive"] = bs.expected_expensive;
    b["note"] = bs.note;
    auto members = nlohmann::ordered_json::array();
    for (const EnsembleMember& m : db.ens.members) {
      nlohmann::ordered_json mj;
      mj["weight"] = m.weight;
      mj["error"] = m.e_i;
      mj["expensive"] = m.expensive_count;
      mj["qasm"] = emit_qasm(m.circuit);
      members.push_back(std::move(mj));
    }
    b["members"] = std::move(members);
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

}  // namespace

const char* partitioner_name(PartitionerKind p) {
  switch (p) {
    case PartitionerKind::Scan:
      return "scan";
    case PartitionerKind::Quick:
      return "quick";
    case PartitionerKind::Hier:
      return "hier";
  }
  return "?";
}

Circuit load_input(const CompileConfig& cfg,
                   std::vector<std::string>* warnings) {
  const bool has_file = !cfg.input_path.empty();
  const bool has_bench = !cfg.benchmark.empty();
  if (has_file == has_bench)
    throw InputError("need exactly one of --input and --benchmark");
  if (has_bench) {
    std::string name;
    int n = 0, steps = 1;
    std::istringstream ss(cfg.benchmark);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ':')) fields.push_back(field);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("benchmark spec must be name:n[:steps], got '" +
                       cfg.benchmark + "'");
    name = fields[0];
    try {
      n = std::stoi(fields[1]);
      if (fields.size() == 3) steps = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw ParseError("bad number in benchmark spec '" + cfg.benchmark + "'");
    }
    return benchmark_circuit(name, n, steps, cfg.seed);
  }
  std::ifstream f(cfg.input_path);
  if (!f) throw InputError("cannot open " + cfg.input_path);
  std::ostringstream text;
  text << f.rdbuf();
  return parse_qasm(text.str(), warnings);
}

CMat zz_chain_observable(int n) {
  if (n < 1) throw InputError("observable needs at least one qubit");
  const Eigen::Index d = Eigen::Index(1) << n;
  CMat obs = CMat::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    double val = 0.0;
    if (n == 1) {
      val = (b & 1) ? -1.0 : 1.0;
    } else {
      for (int i = 0; i + 1 < n; ++i) {
        const double si = ((b >> i) & 1) ? -1.0 : 1.0;
        const double sj = ((b >> (i + 1)) & 1) ? -1.0 : 1.0;
        val += si * sj;
      }
    }
    obs(b, b) = val;
  }
  return obs;
}

CompileResult compile(const CompileConfig& cfg) {
  if (!(cfg.eps2 > 0.0 && cfg.eps2 < 1.0))
    throw InputError("eps2 must lie in (0, 1)");
  if (cfg.block_width < 2 || cfg.block_width > 5)
    throw InputError("block width must lie in [2, 5]");
  if (cfg.diversify_count < 0) throw InputError("diversify count must be >= 0");
  if (cfg.variant_cap < 1) throw InputError("variant cap must be >= 1");
  if (cfg.restarts < 1) throw InputError("restarts must be >= 1");
  if (cfg.t_cap < 1) throw InputError("t cap must be >= 1");
  if (cfg.workers < 0) throw InputError("workers must be >= 0");
  const double eps = std::sqrt(cfg.eps2);

  CompileResult res;
  const Circuit input = load_input(cfg, &res.warnings);
  Circuit work = input;
  int n_z = 0;
  if (cfg.profile == GateSetProfile::FT) {
    work = expand_to_clifford_rz(input);
    n_z = count_non_clifford_rz(work);
  }

  PartitionedCircuit pc;
  switch (cfg.partitioner) {
    case PartitionerKind::Scan:
      pc = scan_partition(work, cfg.block_width);
      break;
    case PartitionerKind::Quick:
      pc = quick_partition(work, cfg.block_width);
      break;
    case PartitionerKind::Hier: {
      const int outer =
          std::max(cfg.block_width, std::min(work.width, 2 * cfg.block_width));
      pc = hierarchical_partition(work, outer, cfg.block_width);
      break;
    }
  }

  const size_t n_blocks = pc.blocks.size();
  std::vector<uint64_t> keys(n_blocks);
  for (size_t i = 0; i < n_blocks; ++i) keys[i] = block_key(pc.blocks[i]);

  // Fan the blocks over a bounded pool; identical blocks share one compute
  // through the promise cache, and everything downstream is keyed by block
  // index, so the schedule cannot leak into the output.
  std::vector<std::shared_ptr<const BlockWork>> works(n_blocks);
  {
    using Fut = std::shared_future<std::shared_ptr<const BlockWork>>;
    std::mutex cache_mu;
    std::map<uint64_t, Fut> cache;
    std::atomic<size_t> cursor{0};
    std::mutex err_mu;
    std::exception_ptr first_err;

    auto run_one = [&](size_t i) {
      Fut fut;
      bool owner = false;
      std::promise<std::shared_ptr<const BlockWork>> prom;
      {
        std::lock_guard<std::mutex> lk(cache_mu);
        auto it = cache.find(keys[i]);
        if (it == cache.end()) {
          fut = prom.get_future().share();
          cache.emplace(keys[i], fut);
          owner = true;
        } else {
          fut = it->second;
        }
      }
      if (owner) {
        try {
          prom.set_value(cfg.profile == GateSetProfile::FT
                             ? process_ft(cfg, eps, n_z, pc.blocks[i], keys[i])
                             : process_nisq(cfg, eps, pc.blocks[i], keys[i]));
        } catch (...) {
          prom.set_exception(std::current_exception());
        }
      }
      works[i] = fut.get();
    };

    auto worker = [&]() {
      for (;;) {
        const size_t i = cursor.fetch_add(1);
        if (i >= n_blocks) return;
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!first_err) first_err = std::current_exception();
          return;
        }
      }
    };

    int n_workers = cfg.workers > 0
                        ? cfg.workers
                        : std::max(1, int(std::thread::hardware_concurrency()));
    n_workers = int(std::min<size_t>(n_workers, std::max<size_t>(n_blocks, 1)));
    if (n_workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(n_workers);
      for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    if (first_err) std::rethrow_exception(first_err);
  }

  res.dist.width = input.width;
  res.dist.original = input;
  res.blocks.resize(n_blocks);
  for (size_t i = 0; i < n_blocks; ++i) {
    const BlockWork& bw = *works[i];
    res.dist.blocks.push_back(DistBlock{pc.blocks[i].qubit_map, bw.ens});
    BlockSummary& bs = res.blocks[i];
    bs.index = int(i);
    bs.width = int(pc.blocks[i].qubit_map.size());
    bs.member_count = int(bw.ens.members.size());
    bs.wee = bw.ens.wee;
    bs.bias = bw.ens.bias;
    bs.gamma = bw.ens.gamma;
    bs.gamma_b = bw.ens.gamma_b;
    bs.accepted = bw.ens.accepted;
    bs.expected_expensive = bw.expected;
    bs.reference_expensive = bw.reference;
    bs.note = bw.note;
    res.expected_expensive += bw.expected;
    res.reference_expensive += bw.reference;
    if (bs.accepted) ++res.accepted_count;
    res.channel.block_wee.push_back(bw.ens.wee);
    res.channel.wee_total += bw.ens.wee;
  }

  // Concentration quantities block by block; the report keeps the worst.
  res.channel.t_bound = 0;
  for (size_t i = 0; i < n_blocks; ++i) {
    if (int(pc.blocks[i].qubit_map.size()) > kLemma3Cap) continue;
    Lemma3Quantities q = lemma3_quantities(works[i]->ens);
    res.channel.v = std::max(res.channel.v, q.v);
    res.channel.r = std::max(res.channel.r, q.r);
    res.channel.t_bound =
        std::max(res.channel.t_bound, q.t_bound(eps, kReportDelta));
  }

  if (res.dist.width <= kChannelCap) {
    const CMat obs = zz_chain_observable(res.dist.width);
    CVec psi0 = CVec::Zero(Eigen::Index(1) << res.dist.width);
    psi0(0) = 1.0;
    res.channel.observable_err = observable_error(res.dist, obs, psi0);
    res.channel.max_trace_dist =
        max_trace_distance(res.dist, 10, derive_seed(cfg.seed, 0x3d7));
  } else {
    res.channel.observable_err = -1.0;
    res.channel.max_trace_dist = -1.0;
  }

  res.ensemble_json = ensemble_json(cfg, eps, res, keys).dump(2) + "\n";
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "ensemble.json";
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << res.ensemble_json;
  }
  return res;
}

std::string tables_csv(const std::vector<TableRow>& rows) {
  std::string out = "benchmark,profile,eps2,reference,expected,percent_change\n";
  for (const TableRow& r : rows) {
    const double pct =
        r.reference > 0.0 ? 100.0 * (r.expected - r.reference) / r.reference
                          : 0.0;
    out += r.benchmark;
    out += ',';
    out += profile_name(r.profile);
    out += ',';
    out += fmt_g(r.eps2);
    out += ',';
    out += fmt_g(r.reference);
    out += ',';
    out += fmt_g(r.expected);
    out += ',';
    out += fmt_g(pct);
    out += '\n';
  }
  return out;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::string out =
      "benchmark,profile,eps2,blocks,wee_total,observable_err,max_trace_dist,"
      "bound\n";
  for (const ScalingRow& r : rows) {
    out += r.benchmark;
    out += ',';
    out += profile_name(r.profile);
    out += ',';
    out += fmt_g(r.eps2);
    out += ',';
    out += std::to_string(r.blocks);
    out += ',';
    out += fmt_g(r.wee_total);
    out += ',';
    out += fmt_g(r.observable_err);
    out += ',';
    out += fmt_g(r.max_trace_dist);
    out += ',';
    out += fmt_g(double(r.blocks) * r.eps2);
    out += '\n';
  }
  return out;
}

std::string convergence_csv(const std::string& benchmark,
                            const std::vector<ConvergenceRow>& rows) {
  std::string out = "benchmark,eps2,t,mean,lo,hi,is_first\n";
  for (const ConvergenceRow& r : rows) {
    out += benchmark;
    out += ',';
    out += fmt_g(r.eps * r.eps);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += fmt_g(r.mean);
    out += ',';
    out += fmt_g(r.lo);
    out += ',';
    out += fmt_g(r.hi);
    out += ',';
    out += r.is_first ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace ensc
