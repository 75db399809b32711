#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ensc/circuit.hpp"
#include "ensc/errors.hpp"
#include "ensc/linalg.hpp"
#include "ensc/qasm.hpp"
#include "ensc/workflow.hpp"
#include "json.hpp"

using namespace ensc;

namespace {

CompileConfig tiny_nisq() {
  CompileConfig cfg;
  cfg.benchmark = "heisenberg:2:1";
  cfg.eps2 = 1e-2;
  cfg.block_width = 2;
  cfg.seed = 1;
  return cfg;
}

std::filesystem::path write_temp_qasm(const std::string& name,
                                      const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_SUITE("workflow") {

TEST_CASE("load input resolves benchmarks") {
  CompileConfig cfg;
  cfg.benchmark = "heisenberg:3:2";
  Circuit c = load_input(cfg);
  CHECK(c.width == 3);
  CHECK(c.size() > 0);

  cfg.benchmark = "qaoa_ring:4";  // steps default to 1
  CHECK(load_input(cfg).width == 4);
}

TEST_CASE("load input rejects bad configs") {
  CompileConfig none;
  CHECK_THROWS_AS((void)load_input(none), InputError);

  CompileConfig both;
  both.benchmark = "heisenberg:2:1";
  both.input_path = "whatever.qasm";
  CHECK_THROWS_AS((void)load_input(both), InputError);

  CompileConfig bad;
  bad.benchmark = "heisenberg:two";
  CHECK_THROWS_AS((void)load_input(bad), ParseError);

  CompileConfig missing;
  missing.input_path = "/nonexistent/nowhere.qasm";
  CHECK_THROWS_AS((void)load_input(missing), InputError);
}

TEST_CASE("load input parses files and keeps warnings") {
  auto path = write_temp_qasm("ensc_wf_in.qasm",
                              "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\n"
                              "h q[0];\ncx q[0],q[1];\n"
                              "measure q[0] -> c[0];\n");
  CompileConfig cfg;
  cfg.input_path = path.string();
  std::vector<std::string> warnings;
  Circuit c = load_input(cfg, &warnings);
  CHECK(c.size() == 2);
  CHECK(!warnings.empty());
  std::filesystem::remove(path);
}

TEST_CASE("zz chain observable") {
  CMat z1 = zz_chain_observable(1);
  CHECK(z1(0, 0).real() == doctest::Approx(1.0));
  CHECK(z1(1, 1).real() == doctest::Approx(-1.0));

  CMat z2 = zz_chain_observable(2);
  CHECK(z2(0, 0).real() == doctest::Approx(1.0));
  CHECK(z2(1, 1).real() == doctest::Approx(-1.0));
  CHECK(z2(2, 2).real() == doctest::Approx(-1.0));
  CHECK(z2(3, 3).real() == doctest::Approx(1.0));
  CHECK(frobenius_norm(z2 - z2.adjoint()) < 1e-15);
}

TEST_CASE("compile validates its numbers") {
  CompileConfig cfg = tiny_nisq();
  cfg.eps2 = 0.0;
  CHECK_THROWS_AS((void)compile(cfg), InputError);
  cfg = tiny_nisq();
  cfg.eps2 = 1.5;
  CHECK_THROWS_AS((void)compile(cfg), InputError);
  cfg = tiny_nisq();
  cfg.block_width = 1;
  CHECK_THROWS_AS((void)compile(cfg), InputError);
  cfg = tiny_nisq();
  cfg.block_width = 6;
  CHECK_THROWS_AS((void)compile(cfg), InputError);
  cfg = tiny_nisq();
  cfg.variant_cap = 0;
  CHECK_THROWS_AS((void)compile(cfg), InputError);
}

TEST_CASE("compile summary is internally consistent") {
  CompileResult r = compile(tiny_nisq());
  REQUIRE(!r.blocks.empty());
  CHECK(r.dist.block_count() == int(r.blocks.size()));
  CHECK(r.channel.block_wee.size() == r.blocks.size());

  double exp_sum = 0.0, ref_sum = 0.0, wee_sum = 0.0;
  int accepted = 0;
  for (const auto& b : r.blocks) {
    exp_sum += b.expected_expensive;
    ref_sum += b.reference_expensive;
    wee_sum += b.wee;
    if (b.accepted) ++accepted;
    if (!b.accepted) CHECK(!b.note.empty());
  }
  CHECK(r.expected_expensive == doctest::Approx(exp_sum).epsilon(1e-12));
  CHECK(r.reference_expensive == doctest::Approx(ref_sum).epsilon(1e-12));
  CHECK(r.channel.wee_total == doctest::Approx(wee_sum).epsilon(1e-12));
  CHECK(r.accepted_count == accepted);

  // Weights per block form a distribution.
  for (const auto& db : r.dist.blocks) {
    double wsum = 0.0;
    for (const auto& m : db.ens.members) wsum += m.weight;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("compile is deterministic and worker independent") {
  CompileConfig cfg = tiny_nisq();
  cfg.workers = 1;
  std::string a = compile(cfg).ensemble_json;
  std::string b = compile(cfg).ensemble_json;
  CHECK(a == b);
  cfg.workers = 4;
  CHECK(compile(cfg).ensemble_json == a);
}

TEST_CASE("seed changes the ensemble") {
  CompileConfig cfg = tiny_nisq();
  auto a = nlohmann::json::parse(compile(cfg).ensemble_json);
  cfg.seed = 2;
  auto b = nlohmann::json::parse(compile(cfg).ensemble_json);
  // Compare the actual content, not the recorded seed.
  a.erase("seed");
  b.erase("seed");
  CHECK(a.dump() != b.dump());
}

TEST_CASE("ensemble json carries the schema") {
  CompileConfig cfg = tiny_nisq();
  auto dir = std::filesystem::temp_directory_path() / "ensc_wf_out";
  cfg.out_dir = dir.string();
  CompileResult r = compile(cfg);
  auto j = nlohmann::json::parse(r.ensemble_json);
  CHECK(j["format"] == "ensemble-v1");
  CHECK(j["profile"] == "nisq");
  CHECK(j["width"] == 2);
  REQUIRE(j["blocks"].is_array());
  REQUIRE(!j["blocks"].empty());
  const auto& b0 = j["blocks"][0];
  CHECK(b0.contains("qubits"));
  CHECK(b0.contains("members"));
  CHECK(!b0["members"].empty());
  CHECK(b0["members"][0].contains("qasm"));

  std::ifstream in(dir / "ensemble.json");
  REQUIRE(in.good());
  std::string on_disk((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(on_disk == r.ensemble_json);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ft compile of a small file input") {
  auto path = write_temp_qasm("ensc_wf_ft.qasm",
                              "OPENQASM 2.0;\nqreg q[2];\nh q[0];\n"
                              "cx q[0],q[1];\nrz(0.3) q[1];\n");
  CompileConfig cfg;
  cfg.input_path = path.string();
  cfg.profile = GateSetProfile::FT;
  cfg.eps2 = 1e-2;
  cfg.block_width = 2;
  CompileResult r = compile(cfg);
  CHECK(r.reference_expensive > 0.0);
  // The t guard keeps the expectation at or below the reference lowering.
  CHECK(r.expected_expensive <= r.reference_expensive + 1e-9);
  auto j = nlohmann::json::parse(r.ensemble_json);
  CHECK(j["profile"] == "ft");
  // Sampled members carry clifford+t circuits only: angles are multiples
  // of pi/2 after lowering.
  for (const auto& blk : j["blocks"])
    for (const auto& m : blk["members"]) {
      Circuit mc = parse_qasm(m["qasm"].get<std::string>());
      CHECK(count_non_clifford_rz(mc) == 0);
    }
  std::filesystem::remove(path);
}

TEST_CASE("partitioner choices agree on the target unitary") {
  for (PartitionerKind p :
       {PartitionerKind::Scan, PartitionerKind::Quick, PartitionerKind::Hier}) {
    CompileConfig cfg = tiny_nisq();
    cfg.benchmark = "heisenberg:3:1";
    cfg.eps2 = 1e-24;  // forces exact singletons everywhere
    cfg.partitioner = p;
    CompileResult r = compile(cfg);
    CHECK(r.accepted_count == 0);
    CHECK(r.expected_expensive == doctest::Approx(r.reference_expensive));
    CHECK(r.channel.max_trace_dist < 1e-9);
  }
}

TEST_CASE("csv emitters") {
  TableRow t;
  t.benchmark = "bench";
  t.profile = GateSetProfile::NISQ;
  t.eps2 = 0.01;
  t.reference = 36.0;
  t.expected = 24.0;
  std::string table = tables_csv({t});
  CHECK(table.rfind("benchmark,profile,eps2,reference,expected,percent_change\n",
                    0) == 0);
  CHECK(table.find("bench,nisq,0.01,36,24,-33.333") != std::string::npos);

  ScalingRow s;
  s.benchmark = "bench";
  s.profile = GateSetProfile::FT;
  s.eps2 = 1e-4;
  s.blocks = 4;
  s.wee_total = 0.5;
  s.observable_err = 0.25;
  s.max_trace_dist = 0.125;
  std::string scaling = scaling_csv({s});
  CHECK(scaling.rfind("benchmark,profile,eps2,blocks,wee_total,observable_err,"
                      "max_trace_dist,bound\n",
                      0) == 0);
  // bound = blocks * eps2
  CHECK(scaling.find("bench,ft,0.0001,4,0.5,0.25,0.125,0.0004") !=
        std::string::npos);

  ConvergenceRow c;
  c.eps = 0.1;
  c.t = 10;
  c.mean = 0.5;
  c.lo = 0.25;
  c.hi = 0.75;
  c.is_first = true;
  std::string conv = convergence_csv("bench", {c});
  CHECK(conv.rfind("benchmark,eps2,t,mean,lo,hi,is_first\n", 0) == 0);
  CHECK(conv.find(",10,0.5,0.25,0.75,1") != std::string::npos);
}

TEST_CASE("partitioner names") {
  CHECK(std::string(partitioner_name(PartitionerKind::Scan)) == "scan");
  CHECK(std::string(partitioner_name(PartitionerKind::Quick)) == "quick");
  CHECK(std::string(partitioner_name(PartitionerKind::Hier)) == "hier");
}

}  // TEST_SUITE
