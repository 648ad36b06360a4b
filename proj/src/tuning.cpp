#include "masp/tuning.hpp"

#include <cmath>
#include <stdexcept>

namespace masp {

static void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double choose_tau(const TuningInputs& in, bool use_trace) {
  require(in.beta > 0.0, "choose_tau: beta must be > 0");
  require(in.n >= 1, "choose_tau: n must be >= 1");
  require(in.m >= 1, "choose_tau: M must be >= 1");
  require(in.radius > 0.0, "choose_tau: radius must be > 0");
  const double mass = use_trace ? in.trace_gram : static_cast<double>(in.m);
  require(mass > 0.0, "choose_tau: trace of the Gram must be > 0");
  const double a = std::sqrt(in.beta / (mass * static_cast<double>(in.n)));
  const double b = in.radius / (4.0 * static_cast<double>(in.m));
  return std::min(a, b);
}

static bool density_beta_feasible(double beta, double r, double l) {
  const double lhs =
      (beta - 2.0 * r * r) * std::exp(-4.0 * r * (l + std::sqrt(l)) / beta);
  return lhs >= 2.0 * l + 4.0 * r * l;
}

static double density_beta_grid(double r, double l) {
  const double lo = 2.0 * r * r;
  const double hi = 1.0e6 * std::max(l, 1.0);
  require(hi > lo, "choose_beta: density grid is empty");
  const int points = 10000;
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double beta = lo * std::exp(step * i);
    if (density_beta_feasible(beta, r, l)) return beta;
  }
  throw std::runtime_error(
      "choose_beta: no feasible density temperature below the grid cap");
}

double choose_beta(LossKind kind, const TuningInputs& in,
                   bool density_shortcut) {
  switch (kind) {
    case LossKind::RegSquared: {
      require(in.sigma2 >= 0.0, "choose_beta: sigma2 must be >= 0");
      require(in.radius > 0.0 && in.l_phi > 0.0,
              "choose_beta: radius and l_phi must be > 0");
      const double a = in.radius * in.l_phi + 1.0;
      return 2.0 * in.sigma2 + 2.0 * a * a;
    }
    case LossKind::DensityL2: {
      require(in.radius > 0.0, "choose_beta: radius must be > 0");
      require(in.l_density > 0.0, "choose_beta: density sup bound must be > 0");
      if (density_shortcut) {
        if (in.l_density < 2.0)
          throw std::invalid_argument(
              "choose_beta: density shortcut needs L >= 2");
        if (in.radius == 1.0) return 12.0 * in.l_density;
        if (in.radius == 2.0) return 23.0 * in.l_density;
        throw std::invalid_argument(
            "choose_beta: density shortcut defined for R in {1, 2}");
      }
      return density_beta_grid(in.radius, in.l_density);
    }
    case LossKind::PhiSquared:
    case LossKind::PhiTruncated:
    case LossKind::PhiBoosting:
    case LossKind::PhiLogit:
      return phi_registry(kind, in.radius, in.l_phi).beta_phi;
    case LossKind::Hinge: {
      require(in.n >= 1, "choose_beta: n must be >= 1");
      require(in.m_star >= 1, "choose_beta: m_star must be >= 1");
      require(in.radius > 0.0 && in.l_phi > 0.0,
              "choose_beta: radius and l_phi must be > 0");
      return (1.0 + in.radius * in.l_phi) *
             std::sqrt(static_cast<double>(in.n) /
                       static_cast<double>(in.m_star));
    }
  }
  throw std::logic_error("choose_beta: unknown loss kind");
}

double choose_beta_regression_general(double sigma2, double sup_dev, double r,
                                      double l_phi, double b) {
  require(sigma2 >= 0.0 && sup_dev >= 0.0, "choose_beta: negative inputs");
  require(r > 0.0 && l_phi > 0.0, "choose_beta: radius and l_phi must be > 0");
  require(b > 0.0, "choose_beta: exponential-moment range must be > 0");
  const double first = 2.0 * sigma2 + 2.0 * sup_dev * sup_dev;
  const double second = std::isinf(b) ? 0.0 : 4.0 * r * l_phi / b;
  return std::max(first, second);
}

double data_driven_radius(const Eigen::VectorXd& y, double sigma2,
                          int m_star_hat) {
  require(y.size() >= 1, "data_driven_radius: empty response vector");
  require(m_star_hat >= 1, "data_driven_radius: m_star_hat must be >= 1");
  require(sigma2 >= 0.0, "data_driven_radius: sigma2 must be >= 0");
  const double n = static_cast<double>(y.size());
  const double s = y.squaredNorm() - n * sigma2;
  const double inner = static_cast<double>(m_star_hat) / n * s;
  return 4.0 * std::sqrt(std::max(inner, 0.0));
}

// shared ball-geometry checks for every oracle-inequality evaluator
static void check_bound_inputs(const Eigen::VectorXd& lambda_star,
                               const TuningInputs& in, double tau) {
  require(in.m >= 2, "bound: requires M >= 2");
  require(lambda_star.size() == in.m, "bound: lambda_star dimension != M");
  require(in.beta > 0.0, "bound: beta must be > 0");
  require(in.n >= 0, "bound: n must be >= 0");
  require(tau > 0.0, "bound: tau must be > 0");
  const double margin = 2.0 * static_cast<double>(in.m) * tau;
  require(in.radius > margin, "bound: requires radius > 2 M tau");
  if (lambda_star.lpNorm<1>() > in.radius - margin)
    throw std::invalid_argument(
        "bound: ||lambda_star||_1 exceeds radius - 2 M tau");
}

static double log_penalty(const Eigen::VectorXd& lambda_star, double tau) {
  double acc = 0.0;
  for (int j = 0; j < lambda_star.size(); ++j)
    acc += std::log1p(std::abs(lambda_star[j]) / tau);
  return acc;
}

double soi_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                 const TuningInputs& in, double tau, SparsityBoundForm form) {
  check_bound_inputs(lambda_star, in, tau);
  require(in.trace_gram > 0.0, "soi_bound: trace of the Gram must be > 0");
  const double n1 = static_cast<double>(in.n) + 1.0;
  double penalty;
  if (form == SparsityBoundForm::Full) {
    penalty = log_penalty(lambda_star, tau);
  } else {
    int nnz = 0;
    for (int j = 0; j < lambda_star.size(); ++j)
      if (lambda_star[j] != 0.0) ++nnz;
    penalty = nnz * std::log1p(in.radius / tau);
  }
  return oracle_loss + 4.0 * in.beta / n1 * penalty +
         4.0 * tau * tau * in.trace_gram + in.beta / n1;
}

double classif_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                     const TuningInputs& in, double tau, const PhiSpec& spec,
                     const Eigen::VectorXd& phi_sq_norms) {
  check_bound_inputs(lambda_star, in, tau);
  require(phi_sq_norms.size() == in.m, "classif_bound: norm count != M");
  const double n1 = static_cast<double>(in.n) + 1.0;
  return oracle_loss + 4.0 * in.beta / n1 * log_penalty(lambda_star, tau) +
         spec.c_phi * tau * tau * phi_sq_norms.sum() + in.beta / n1;
}

double hinge_bound(double oracle_loss, const Eigen::VectorXd& lambda_star,
                   const TuningInputs& in, double tau) {
  check_bound_inputs(lambda_star, in, tau);
  require(in.l_phi > 0.0, "hinge_bound: l_phi must be > 0");
  const double n1 = static_cast<double>(in.n) + 1.0;
  const double a = 1.0 + in.radius * in.l_phi;
  return oracle_loss + 4.0 * in.beta / n1 * log_penalty(lambda_star, tau) +
         2.0 * a * a * std::exp(a / in.beta) / in.beta +
         4.0 * tau * in.l_phi * std::sqrt(static_cast<double>(in.m)) +
         in.beta / n1;
}

}  // namespace masp
