#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "masp/config.hpp"
#include "masp/experiment.hpp"
#include "masp/report.hpp"
#include "masp/verify.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string method;
  std::uint64_t seed = 0;
  bool has_method = false;
  bool has_seed = false;

  std::map<std::string, std::string> overrides() const {
    std::map<std::string, std::string> o;
    if (has_method) o["method"] = method;
    if (has_seed) o["seed"] = std::to_string(seed);
    return o;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* cfg = cmd->add_option("--config", f.config_path, "key = value config file");
  if (config_required) cfg->required();
  cmd->add_option("--out", f.out_dir, "output directory (default: stdout)");
  cmd->add_option("--method", f.method,
                  "estimator: quadrature | rejection | langevin")
      ->check(CLI::IsMember({"quadrature", "rejection", "langevin"}));
  cmd->add_option("--seed", f.seed, "master seed (overrides config)");
}

void finalize_flags(const CLI::App* cmd, CommonFlags& f) {
  f.has_method = cmd->count("--method") > 0;
  f.has_seed = cmd->count("--seed") > 0;
}

void write_or_print(const std::string& out_dir, const std::string& filename,
                    const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

int run_fit(const CommonFlags& flags, const std::string& data_path) {
  const masp::ExperimentConfig cfg =
      masp::load_experiment_config(flags.config_path, flags.overrides());
  const masp::Dataset data =
      masp::load_dataset_csv(data_path, cfg.task != masp::Task::Density);
  masp::ResolvedTuning tuning;
  const masp::AggregateResult result = masp::fit_dataset(cfg, data, tuning);
  write_or_print(flags.out_dir, "fit.json", masp::fit_to_json(cfg, tuning, result));
  return 0;
}

int run_simulate(const CommonFlags& flags) {
  const masp::ExperimentConfig cfg =
      masp::load_experiment_config(flags.config_path, flags.overrides());
  const masp::Report report = masp::run_experiment(cfg);
  if (report.summary.replications_ok == 0) {
    std::cerr << "all replications failed; first note: "
              << (report.rows.empty() ? "none" : report.rows.front().note) << "\n";
    return 1;
  }
  if (flags.out_dir.empty()) {
    std::cout << masp::summary_to_json(report);
  } else {
    fs::create_directories(flags.out_dir);
    const fs::path rows = fs::path(flags.out_dir) / "rows.csv";
    const fs::path summary = fs::path(flags.out_dir) / "summary.json";
    masp::write_rows_csv(report, rows.string());
    masp::write_summary_json(report, summary.string());
    std::cerr << "wrote " << rows.string() << " and " << summary.string() << "\n";
  }
  const int failed = cfg.replications - report.summary.replications_ok;
  if (failed > 0)
    std::cerr << failed << " of " << cfg.replications << " replications failed\n";
  return 0;
}

int run_verify(const CommonFlags& flags, const std::string& suite) {
  const std::vector<masp::Check> checks = masp::verify_suite(suite);
  std::string table;
  for (const auto& c : checks)
    table += (c.pass ? "PASS " : "FAIL ") + c.name + "  " + c.detail + "\n";
  std::cout << table;
  if (!flags.out_dir.empty()) write_or_print(flags.out_dir, "checks.txt", table);
  return masp::all_pass(checks) ? 0 : 1;
}

int run_bench(const CommonFlags& flags) {
  struct Cell {
    const char* method;
    int m;
  };
  const Cell cells[] = {{"quadrature", 1}, {"quadrature", 2}, {"rejection", 2},
                        {"rejection", 4},  {"rejection", 8},  {"langevin", 2},
                        {"langevin", 8},   {"langevin", 16},  {"langevin", 32}};
  std::string csv = "method,dict_size,seconds,status\n";
  for (const auto& cell : cells) {
    masp::ExperimentConfig cfg;
    cfg.label = "bench";
    cfg.n = 50;
    cfg.sparsity = std::min(2, cell.m);
    cfg.dict_size = cell.m;
    cfg.method = masp::fit_method_from_string(cell.method);
    cfg.samples = 50000;
    cfg.grid_points = 201;
    cfg.chain_steps = 2000;
    cfg.seed = flags.has_seed ? flags.seed : 7;
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const masp::ReplicationRow row = masp::run_replication(cfg, 0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    char line[160];
    std::snprintf(line, sizeof(line), "%s,%d,%.3f,%s\n", cell.method, cell.m,
                  secs, row.ok ? "ok" : row.note.c_str());
    csv += line;
  }
  write_or_print(flags.out_dir, "bench.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mirror-averaging aggregates over sparsity priors"};
  app.require_subcommand(1);

  CommonFlags fit_flags, sim_flags, verify_flags, bench_flags;
  std::string data_path;
  std::string suite = "all";

  CLI::App* fit = app.add_subcommand("fit", "fit one dataset from a CSV file");
  add_common(fit, fit_flags, /*config_required=*/true);
  fit->add_option("--data", data_path, "dataset CSV (covariates then response)")
      ->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a replicated synthetic experiment");
  add_common(simulate, sim_flags, /*config_required=*/true);

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, verify_flags, /*config_required=*/false);
  verify->add_option("suite", suite,
                     "gradients | oracles | bounds | tails | scale | "
                     "calibration | determinism | rate | all");

  CLI::App* bench = app.add_subcommand("bench", "time the estimators across M");
  add_common(bench, bench_flags, /*config_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a config error
  }

  try {
    if (fit->parsed()) {
      finalize_flags(fit, fit_flags);
      return run_fit(fit_flags, data_path);
    }
    if (simulate->parsed()) {
      finalize_flags(simulate, sim_flags);
      return run_simulate(sim_flags);
    }
    if (verify->parsed()) {
      finalize_flags(verify, verify_flags);
      return run_verify(verify_flags, suite);
    }
    if (bench->parsed()) {
      finalize_flags(bench, bench_flags);
      return run_bench(bench_flags);
    }
  } catch (const masp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
