#pragma once

#include <Eigen/Dense>

#include "masp/models.hpp"

namespace masp {

// Everything the closed-form tuning rules and bound evaluators need.
// Fields are only read where relevant: sigma2 by the regression rules,
// l_density by the density temperature, l_phi by margin and hinge rules.
struct TuningInputs {
  double beta = 0.0;
  int n = 0;           // sample size
  int m = 0;           // dictionary size M
  double radius = 0.0; // l1 ball radius R
  double trace_gram = 0.0;
  double sigma2 = 0.0;
  double l_density = 0.0;  // sup-norm bound on candidate densities
  double l_phi = 0.0;      // sup bound of the dictionary functions
  int m_star = 0;          // assumed sparsity
};

// tau = min( sqrt(beta / (M n)), R / (4 M) ).  With use_trace the first
// branch becomes sqrt(beta / (tr(Gram) n)), which makes the rule invariant
// under rescaling the dictionary by s together with R -> R / s.
double choose_tau(const TuningInputs& in, bool use_trace);

// Temperature per loss kind:
//   RegSquared   2 sigma^2 + 2 (R L_phi + 1)^2
//   DensityL2    smallest beta with (beta - 2R^2) e^{-4R(L+sqrt L)/beta}
//                >= 2L + 4RL, found on a 10^4-point log grid over
//                [2R^2, 10^6 max(L,1)]; with density_shortcut the closed-form
//                values 12L (R=1) / 23L (R=2), valid only when L >= 2
//   Phi losses   beta_phi from phi_registry
//   Hinge        (1 + R L_phi) sqrt(n / m_star)
double choose_beta(LossKind kind, const TuningInputs& in,
                   bool density_shortcut = false);

// regression rule with a user-supplied sup_dev >= sup_lambda ||f_lambda - f||_inf
// and exponential-moment range b (pass +inf when noise has all moments):
// max( 2 sigma^2 + 2 sup_dev^2, 4 R L_phi / b )
double choose_beta_regression_general(double sigma2, double sup_dev, double r,
                                      double l_phi, double b);

// R_hat = 4 [ (m_star_hat / n) sum_i (Y_i^2 - sigma2) ]_+^{1/2}
double data_driven_radius(const Eigen::VectorXd& y, double sigma2,
                          int m_star_hat);

enum class SparsityBoundForm { Full, L0 };

// Right side of the sparsity oracle inequality at the reference lambda_star:
//   oracle_loss + (4 beta / (n+1)) sum_j log(1 + |lambda*_j| / tau)
//               + 4 tau^2 tr(Gram) + beta / (n+1)
// (L0 form replaces the sum by ||lambda*||_0 log(1 + R / tau)).
// Requires m >= 2, radius > 2 M tau and ||lambda*||_1 <= radius - 2 M tau.
double soi_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                 const TuningInputs& in, double tau, SparsityBoundForm form);

// smooth-margin classification: remainder c_phi tau^2 sum_j ||phi_j||^2 +
// beta/(n+1); phi_sq_norms are the squared P_X-norms of the dictionary
double classif_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                     const TuningInputs& in, double tau, const PhiSpec& spec,
                     const Eigen::VectorXd& phi_sq_norms);

// hinge: extra smoothing cost 2 (1 + R L)^2 e^{(1+RL)/beta} / beta and
// remainder 4 tau L sqrt(M) + beta/(n+1)
double hinge_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                   const TuningInputs& in, double tau);

}  // namespace masp
