#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "masp/aggregate.hpp"
#include "masp/models.hpp"
#include "masp/prior.hpp"
#include "masp/rng.hpp"

namespace masp {

struct LangevinConfig {
  // Euler step; 0 selects the tau-scaled default min(1e-3, tau^2 / 10),
  // which sits a factor 5 inside the explicit-scheme stability limit
  // tau^2 / 2 of the prior's stiffest curvature 4 / tau^2.
  double step = 0.0;
  double total_time = 0.0;  // chain horizon T; the chain holds floor(T/h) states
  double burn_in = 0.2;     // leading fraction of states ignored by estimates
  std::uint64_t seed = 1;
  int threads = 1;  // stage chains are independent; results do not depend on this

  double resolved_step(double tau) const;
  void validate(double tau) const;  // requires floor(T/h) >= 10, burn_in in [0,1)
};

// Stage drift targets: V_m(lambda) = -beta^{-1} sum_{i<=m} Q(z_i, f_lambda)
//                      - sum_j 2 { log(tau^2 + lambda_j^2) + huber(alpha lambda_j) }.
//
// Data terms are folded into per-stage prefix statistics where the loss allows
// it (quadratic for regression, linear-plus-quadratic for density, fully
// linear for the hinge on dictionaries with R * L_phi <= 1, where the margin
// never reaches the kink inside the ball).  The general hinge uses the K_eps
// ramp for both value and gradient so the two stay exact derivatives of each
// other; exact-hinge values are only ever used in weights and reported risks.
class PotentialEvaluator {
 public:
  PotentialEvaluator(const Dataset& data, const LossModel& model,
                     const Dictionary& dict, const PriorConfig& prior,
                     double beta);

  int dim() const { return prior_.dim; }
  int n() const { return n_; }
  bool hinge_linear() const { return hinge_linear_; }

  double value(const Eigen::VectorXd& lambda, int m) const;
  void grad(const Eigen::VectorXd& lambda, int m, Eigen::VectorXd& out) const;

 private:
  LossModel model_;
  PriorConfig prior_;
  double beta_;
  int n_;
  bool hinge_linear_ = false;

  // regression: prefix second moments, cross moments, squared responses
  std::vector<Eigen::MatrixXd> xx_;
  Eigen::MatrixXd xy_;  // (n+1) x M
  Eigen::VectorXd yy_;  // n+1
  // density: prefix dictionary sums and the Gram
  Eigen::MatrixXd phi_sum_;  // (n+1) x M
  Eigen::MatrixXd gram_;
  // margin losses / general hinge: raw design rows and labels
  Eigen::MatrixXd phi_rows_;  // n x M
  Eigen::VectorXd labels_;
  // linear hinge: prefix label-weighted dictionary sums
  Eigen::MatrixXd yphi_sum_;  // (n+1) x M
};

double potential(const Dataset& data, const LossModel& model,
                 const Dictionary& dict, const PriorConfig& prior, double beta,
                 const Eigen::VectorXd& lambda, int m);
Eigen::VectorXd grad_potential(const Dataset& data, const LossModel& model,
                               const Dictionary& dict, const PriorConfig& prior,
                               double beta, const Eigen::VectorXd& lambda,
                               int m);

// Euler discretization started at the origin:
//   L_{k+1} = L_k + h * grad(L_k) + sqrt(2 h) W_k,  W_k iid standard normal.
// Returns floor(total_time / step) states, the origin included, one per row.
// Throws std::runtime_error naming the step index if a state leaves the
// floating-point range.
Eigen::MatrixXd run_chain(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& grad,
    double step, double total_time, int dim, Rng& rng);

struct RatioEstimate {
  Eigen::VectorXd mean;  // average of in-ball states after burn-in
  double occupancy;      // in-ball share of the averaged stretch
};

// Throws if no post-burn-in state lies in the l1 ball (radius too small or
// the chain diverged); that is the failure mode the occupancy diagnostics
// are there to catch.
RatioEstimate ratio_estimate(const Eigen::MatrixXd& states, double radius,
                             double burn_in);

// One chain per stage potential V_0..V_n, each with a seed derived from
// (cfg.seed, stage); stage ratio estimates are averaged with equal weight.
AggregateResult ma_langevin(const Dataset& data, const LossModel& model,
                            const Dictionary& dict, const PriorConfig& prior,
                            double beta, const LangevinConfig& cfg);

// final-stage chain only: the exponential-weights estimate
AggregateResult ewa_langevin(const Dataset& data, const LossModel& model,
                             const Dictionary& dict, const PriorConfig& prior,
                             double beta, const LangevinConfig& cfg);

// optional trajectory dump used by the CLI debug flag:
// step index, coordinates, in-ball flag
void dump_trajectory_csv(const std::string& path, const Eigen::MatrixXd& states,
                         double radius);

}  // namespace masp
