#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "masp/aggregate.hpp"
#include "masp/generators.hpp"
#include "masp/models.hpp"

namespace masp {

// Invalid usage (bad file, unknown key, out-of-range value).  The CLI maps
// this to exit code 2; runtime failures map to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// `key = value` lines, '#' comments, blank lines ignored; duplicate keys are
// an error.  Every key must be consumed by the typed getters or
// finalize() throws, so typos never pass silently.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);  // true/false/1/0

  void finalize() const;  // throws ConfigError listing unconsumed keys

 private:
  std::string raw(const std::string& key);
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> consumed_;
};

// One synthetic experiment: problem family, estimator, tuning, budgets.
struct ExperimentConfig {
  std::string label = "experiment";
  Task task = Task::Regression;
  LossKind loss = LossKind::RegSquared;
  FitMethod method = FitMethod::Rejection;
  bool ewa_only = false;  // keep only the final-stage posterior mean

  // problem: defaults form a valid config (dict_size within the cap of the
  // default rejection method)
  int n = 100;
  int dict_size = 8;
  int sparsity = 2;
  double noise_sigma = 0.5;     // regression
  double signal_l1 = 1.0;       // regression: ||lambda*||_1
  double coef_magnitude = 0.0;  // density/classification |lambda*_j|; 0 = task default
  DesignKind design = DesignKind::Rademacher;

  // run
  int replications = 1;
  std::uint64_t seed = 1;
  int eval_points = 10000;
  int threads = 1;

  // tuning; beta/tau = 0 means the closed-form rule, radius = 0 the task
  // default (regression: data-driven)
  double radius = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double alpha = 0.0;  // huber taper; > 0 only valid with method = langevin
  int sparsity_hat = 0;  // assumed sparsity for tuning; 0 = generating value
  bool tau_trace = true;
  bool density_beta_shortcut = false;
  double hinge_eps = 1e-3;

  // budgets
  int samples = 100000;
  int grid_points = 401;
  double step = 0.0;      // 0 = tau-scaled default
  int chain_steps = 3000; // states per stage chain
  double burn_in = 0.2;

  void validate() const;  // throws ConfigError
};

// Parse and validate; `overrides` (from CLI flags), given as key=value
// strings, take precedence over the file.  An empty path yields defaults
// plus overrides.
ExperimentConfig load_experiment_config(
    const std::string& path,
    const std::map<std::string, std::string>& overrides = {});

}  // namespace masp
