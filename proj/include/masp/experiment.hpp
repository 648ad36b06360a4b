#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "masp/aggregate.hpp"
#include "masp/config.hpp"
#include "masp/generators.hpp"
#include "masp/tuning.hpp"

namespace masp {

struct ResolvedTuning {
  double beta = 0.0;
  double tau = 0.0;
  double radius = 0.0;
  double alpha = 0.0;
};

// Fill unset (zero) tuning fields from the closed-form rules, using the
// problem instance where the rule is data-driven (the regression radius).
ResolvedTuning resolve_tuning(const ExperimentConfig& cfg, const Problem& prob);

// Synthetic instance for replication `rep` (seeds derived from cfg.seed).
Problem generate_problem(const ExperimentConfig& cfg, int rep);

struct ReplicationRow {
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string note;  // failure reason when !ok
  double beta = 0.0, tau = 0.0, radius = 0.0;
  double risk = std::numeric_limits<double>::quiet_NaN();
  double oracle_risk = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double misclass = std::numeric_limits<double>::quiet_NaN();  // classification
  double lambda_l1 = std::numeric_limits<double>::quiet_NaN();
  double occupancy = std::numeric_limits<double>::quiet_NaN();
  double ess_min = std::numeric_limits<double>::quiet_NaN();  // exact methods
};

struct Summary {
  int replications_ok = 0;
  double mean_risk = std::numeric_limits<double>::quiet_NaN();
  double se_risk = std::numeric_limits<double>::quiet_NaN();
  double mean_misclass = std::numeric_limits<double>::quiet_NaN();
  double mean_bound = std::numeric_limits<double>::quiet_NaN();
  bool bound_checked = false;
  bool bound_satisfied = false;  // mean_risk + 3 se_risk <= mean_bound
  double wall_seconds = 0.0;     // never written to the CSV rows
};

struct Report {
  ExperimentConfig config;
  std::vector<ReplicationRow> rows;
  Summary summary;
};

// Derivable from the rows alone; the writers re-emit exactly this.
Summary summarize(const std::vector<ReplicationRow>& rows);

// One replication end to end: generate, tune, fit, evaluate risk and the
// oracle-inequality right side at the generating coefficients.
ReplicationRow run_replication(const ExperimentConfig& cfg, int rep);

// All replications (cfg.threads of them in flight at a time).
Report run_experiment(const ExperimentConfig& cfg);

// Fit on externally supplied data with the dictionary family implied by the
// task; used by the CLI `fit` command.
AggregateResult fit_dataset(const ExperimentConfig& cfg, const Dataset& data,
                            ResolvedTuning& tuning_out);

}  // namespace masp
