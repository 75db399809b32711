#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ensc/channel.hpp"
#include "ensc/errors.hpp"
#include "ensc/workflow.hpp"

namespace {

using ensc::CompileConfig;
using ensc::CompileResult;

void add_common_flags(CLI::App* sub, CompileConfig* cfg) {
  sub->add_option("--profile", [cfg](const std::vector<std::string>& vals) {
        const std::string& v = vals.back();
        if (v == "nisq")
          cfg->profile = ensc::GateSetProfile::NISQ;
        else if (v == "ft")
          cfg->profile = ensc::GateSetProfile::FT;
        else
          return false;
        return true;
      })
      ->description("gate set profile: nisq or ft")
      ->type_name("NAME");
  sub->add_option("--block-width", cfg->block_width, "partition width w (2..5)");
  sub->add_option("--partitioner",
                  [cfg](const std::vector<std::string>& vals) {
                    const std::string& v = vals.back();
                    if (v == "scan")
                      cfg->partitioner = ensc::PartitionerKind::Scan;
                    else if (v == "quick")
                      cfg->partitioner = ensc::PartitionerKind::Quick;
                    else if (v == "hier")
                      cfg->partitioner = ensc::PartitionerKind::Hier;
                    else
                      return false;
                    return true;
                  })
      ->description("partitioner: scan, quick or hier")
      ->type_name("NAME");
  sub->add_option("--seed", cfg->seed, "rng seed");
  sub->add_option("--workers", cfg->workers, "worker threads (0 = cpu count)");
  sub->add_option("--diversify-count", cfg->diversify_count,
                  "perturbed variants per synthesis result");
  sub->add_option("--variant-cap", cfg->variant_cap,
                  "ensemble pool cap per block");
  sub->add_option("--restarts", cfg->restarts,
                  "instantiation restarts per template");
  sub->add_option("--t-cap", cfg->t_cap, "per-rz T budget for word search");
  sub->set_config("--config", "", "key=value config file; flags win");
}

const char* expensive_unit(ensc::GateSetProfile p) {
  return p == ensc::GateSetProfile::FT ? "t" : "cnot";
}

void print_compile_summary(const CompileConfig& cfg, const CompileResult& res) {
  for (const std::string& w : res.warnings) std::cout << "warning: " << w << "\n";
  std::printf("profile %s  eps2 %g  blocks %d  accepted %d/%d\n",
              ensc::profile_name(cfg.profile), cfg.eps2,
              res.dist.block_count(), res.accepted_count,
              res.dist.block_count());
  const double ref = res.reference_expensive;
  const double exp = res.expected_expensive;
  std::printf("expected[%s] %.6g  reference %.6g", expensive_unit(cfg.profile),
              exp, ref);
  if (ref > 0)
    std::printf("  change %+.2f%%", 100.0 * (exp - ref) / ref);
  std::printf("\n");
  std::printf("wee_total %.6g\n", res.channel.wee_total);
  if (res.channel.observable_err >= 0)
    std::printf("observable_err %.6g  max_trace_dist %.6g\n",
                res.channel.observable_err, res.channel.max_trace_dist);
  else
    std::printf("channel metrics skipped (width > 8)\n");
  std::printf("worst block: v %.6g  R %.6g  t_bound %lld\n", res.channel.v,
              res.channel.r, (long long)res.channel.t_bound);
  for (const ensc::BlockSummary& b : res.blocks) {
    std::printf("  block %d  w=%d  members %d  wee %.3g  E[%s] %.4g  ref %.4g%s%s\n",
                b.index, b.width, b.member_count, b.wee,
                expensive_unit(cfg.profile), b.expected_expensive,
                b.reference_expensive, b.note.empty() ? "" : "  ",
                b.note.c_str());
  }
  if (!cfg.out_dir.empty())
    std::printf("wrote %s/ensemble.json\n", cfg.out_dir.c_str());
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  const auto parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(out_path);
  if (!f) throw ensc::InputError("cannot write " + out_path);
  f << text;
  std::cout << "wrote " << out_path << "\n";
}

int run_inspect(const std::string& path, int block, bool show_qasm) {
  std::ifstream f(path);
  if (!f) throw ensc::InputError("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ensc::ParseError(std::string("bad ensemble json: ") + e.what());
  }
  std::printf("%s  profile %s  eps2 %g  width %d  blocks %zu\n",
              j.value("source", std::string("?")).c_str(),
              j.value("profile", std::string("?")).c_str(),
              j.value("eps2", 0.0), j.value("width", 0), j["blocks"].size());
  std::printf("expected %g  reference %g  wee_total %g\n",
              j.value("expected_expensive", 0.0),
              j.value("reference_expensive", 0.0), j.value("wee_total", 0.0));
  for (const auto& b : j["blocks"]) {
    const int idx = b.value("index", -1);
    if (block >= 0 && idx != block) continue;
    std::printf("block %d  qubits [", idx);
    bool first = true;
    for (const auto& q : b["qubits"]) {
      std::printf("%s%d", first ? "" : " ", q.get<int>());
      first = false;
    }
    std::printf("]  %s  wee %.3g  gamma %.3g  members %zu%s%s\n",
                b.value("accepted", false) ? "accepted" : "fallback",
                b.value("wee", 0.0), b.value("gamma", 0.0),
                b["members"].size(),
                b.value("note", std::string()).empty() ? "" : "  note: ",
                b.value("note", std::string()).c_str());
    if (block >= 0) {
      for (const auto& m : b["members"]) {
        std::printf("  weight %-12.6g error %-12.4g expensive %d\n",
                    m.value("weight", 0.0), m.value("error", 0.0),
                    m.value("expensive", 0));
        if (show_qasm) std::printf("%s\n", m.value("qasm", std::string()).c_str());
      }
    }
  }
  if (block >= 0) {
    bool found = false;
    for (const auto& b : j["blocks"])
      if (b.value("index", -1) == block) found = true;
    if (!found) throw ensc::InputError("no block " + std::to_string(block));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble compiler: turns a circuit into a weighted ensemble "
               "of cheaper approximations with certified channel error"};
  app.require_subcommand(1);

  CompileConfig cfg;
  std::vector<std::string> benchmarks;
  std::vector<double> eps2_grid;
  std::vector<int64_t> t_grid = {1,   2,   5,    10,   20,   50,  100,
                                 200, 500, 1000, 2000, 5000, 10000};
  int trials = 5;
  int n_inputs = 4;
  std::string out_path;
  std::string inspect_path;
  int inspect_block = -1;
  bool inspect_qasm = false;

  CLI::App* c_compile = app.add_subcommand(
      "compile", "compile one circuit and write its ensemble json");
  c_compile->add_option("--input", cfg.input_path, "openqasm 2.0 input file");
  c_compile->add_option("--benchmark", cfg.benchmark,
                        "builtin circuit name:n[:steps] "
                        "(heisenberg, qaoa_ring, qft_adder)");
  c_compile->add_option("--epsilon2", cfg.eps2, "target squared error");
  c_compile->add_option("--out", cfg.out_dir, "output directory");
  add_common_flags(c_compile, &cfg);

  CLI::App* c_tables = app.add_subcommand(
      "tables", "expensive-gate counts over a benchmark x eps2 grid");
  c_tables->add_option("--benchmark", benchmarks, "name:n[:steps], repeatable")
      ->required();
  c_tables->add_option("--epsilon2", eps2_grid, "eps2 grid, repeatable")
      ->required();
  c_tables->add_option("--out", out_path, "csv path (default stdout)");
  add_common_flags(c_tables, &cfg);

  CLI::App* c_scaling = app.add_subcommand(
      "scaling", "channel error metrics against the K*eps2 bound");
  c_scaling->add_option("--benchmark", benchmarks, "name:n[:steps], repeatable")
      ->required();
  c_scaling->add_option("--epsilon2", eps2_grid, "eps2 grid, repeatable")
      ->required();
  c_scaling->add_option("--out", out_path, "csv path (default stdout)");
  add_common_flags(c_scaling, &cfg);

  CLI::App* c_conv = app.add_subcommand(
      "convergence", "empirical channel convergence against sample count");
  c_conv->add_option("--benchmark", cfg.benchmark, "name:n[:steps]")
      ->required();
  c_conv->add_option("--epsilon2", eps2_grid, "eps2 grid, repeatable")
      ->required();
  c_conv->add_option("--t-grid", t_grid, "sample counts")->delimiter(',');
  c_conv->add_option("--trials", trials, "repetitions per point");
  c_conv->add_option("--inputs", n_inputs, "haar input states per trial");
  c_conv->add_option("--out", out_path, "csv path (default stdout)");
  add_common_flags(c_conv, &cfg);

  CLI::App* c_inspect =
      app.add_subcommand("inspect", "pretty-print an ensemble json");
  c_inspect->add_option("json", inspect_path, "ensemble.json path")->required();
  c_inspect->add_option("--block", inspect_block, "show one block's members");
  c_inspect->add_flag("--qasm", inspect_qasm, "also print member qasm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_compile->parsed()) {
      print_compile_summary(cfg, ensc::compile(cfg));
    } else if (c_tables->parsed()) {
      std::vector<ensc::TableRow> rows;
      for (const std::string& b : benchmarks) {
        for (double e2 : eps2_grid) {
          CompileConfig c = cfg;
          c.input_path.clear();
          c.benchmark = b;
          c.eps2 = e2;
          c.out_dir.clear();
          CompileResult res = ensc::compile(c);
          rows.push_back({b, c.profile, e2, res.reference_expensive,
                          res.expected_expensive});
        }
      }
      write_or_print(out_path, ensc::tables_csv(rows));
    } else if (c_scaling->parsed()) {
      std::vector<ensc::ScalingRow> rows;
      for (const std::string& b : benchmarks) {
        for (double e2 : eps2_grid) {
          CompileConfig c = cfg;
          c.input_path.clear();
          c.benchmark = b;
          c.eps2 = e2;
          c.out_dir.clear();
          CompileResult res = ensc::compile(c);
          rows.push_back({b, c.profile, e2, res.dist.block_count(),
                          res.channel.wee_total, res.channel.observable_err,
                          res.channel.max_trace_dist});
        }
      }
      write_or_print(out_path, ensc::scaling_csv(rows));
    } else if (c_conv->parsed()) {
      std::vector<std::pair<double, ensc::CircuitDistribution>> entries;
      for (double e2 : eps2_grid) {
        CompileConfig c = cfg;
        c.input_path.clear();
        c.eps2 = e2;
        c.out_dir.clear();
        entries.emplace_back(std::sqrt(e2), ensc::compile(c).dist);
      }
      auto rows = ensc::convergence_study(entries, t_grid, trials, n_inputs,
                                          cfg.seed);
      write_or_print(out_path, ensc::convergence_csv(cfg.benchmark, rows));
    } else if (c_inspect->parsed()) {
      return run_inspect(inspect_path, inspect_block, inspect_qasm);
    }
  } catch (const ensc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ensc::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ensc::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ensc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
