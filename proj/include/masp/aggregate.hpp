#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "masp/models.hpp"
#include "masp/prior.hpp"

namespace masp {

enum class FitMethod { Quadrature, Rejection, Langevin };
FitMethod fit_method_from_string(const std::string& s);
std::string to_string(FitMethod method);

struct ExactBudget {
  int samples = 100000;   // rejection pool size
  int grid_points = 401;  // tensor quadrature nodes per axis
  bool keep_stage_means = false;
};

struct Diagnostics {
  // one entry per stage m = 0..n
  std::vector<double> stage_ess;        // exact methods
  std::vector<double> stage_occupancy;  // langevin: post-burn-in in-ball share
  double ball_occupancy = 1.0;  // rejection acceptance / in-ball node fraction
  double wall_seconds = 0.0;    // not deterministic; never compared or exported
  std::optional<Eigen::MatrixXd> stage_means;  // row m = stage-m inner mean
  std::optional<Eigen::VectorXd> standard_error;  // rejection only
};

struct AggregateResult {
  Eigen::VectorXd lambda_hat;
  FitMethod method = FitMethod::Rejection;
  Diagnostics diag;
};

// sum_{i <= m} Q(z_i, f_lambda); m = 0 contributes nothing
double cumulative_q(const Dataset& data, const LossModel& model,
                    const Dictionary& dict, const Eigen::VectorXd& lambda,
                    int m);

// Mirror average: the equal mix over m = 0..n of the posterior means
//   E_{theta_m pi}[lambda],  theta_m ∝ exp(-cumulative_q(..., m) / beta),
// computed exactly by tensor quadrature (M <= 2) or by self-normalized
// importance sampling with one prior pool reused across stages (M <= 8).
// Both routes require alpha = 0.
AggregateResult ma_exact(const Dataset& data, const LossModel& model,
                         const Dictionary& dict, const PriorConfig& prior,
                         double beta, FitMethod method,
                         const ExactBudget& budget = {},
                         std::uint64_t seed = 1);

// the m = n posterior mean alone (the final-stage exponential-weights vector)
AggregateResult ewa_exact(const Dataset& data, const LossModel& model,
                          const Dictionary& dict, const PriorConfig& prior,
                          double beta, FitMethod method,
                          const ExactBudget& budget = {},
                          std::uint64_t seed = 1);

double predict(const Dictionary& dict, const Eigen::VectorXd& lambda,
               const Eigen::VectorXd& x);

// exp-normalize with the max subtracted; throws if the total mass is zero or
// non-finite (every weight underflowed: beta too small for the data scale)
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& logw);

}  // namespace masp
