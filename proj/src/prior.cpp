#include "masp/prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace masp {

void PriorConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("prior: tau must be > 0");
  if (!(radius > 0.0)) throw std::invalid_argument("prior: radius must be > 0");
  if (alpha < 0.0) throw std::invalid_argument("prior: alpha must be >= 0");
  if (dim < 1) throw std::invalid_argument("prior: dim must be >= 1");
}

double huber(double t) {
  const double a = std::abs(t);
  return a <= 1.0 ? t * t : 2.0 * a - 1.0;
}

double huber_prime(double t) {
  if (t > 1.0) return 2.0;
  if (t < -1.0) return -2.0;
  return 2.0 * t;
}

double log_prior_terms(const Eigen::VectorXd& lambda, const PriorConfig& cfg,
                       double huber_weight) {
  const double t2 = cfg.tau * cfg.tau;
  double acc = 0.0;
  for (int j = 0; j < lambda.size(); ++j) {
    const double lj = lambda[j];
    acc -= 2.0 * std::log(t2 + lj * lj);
    if (cfg.alpha > 0.0) acc -= huber_weight * huber(cfg.alpha * lj);
  }
  return acc;
}

void grad_prior_terms(const Eigen::VectorXd& lambda, const PriorConfig& cfg,
                      double huber_weight, Eigen::VectorXd& out) {
  const double t2 = cfg.tau * cfg.tau;
  out.resize(lambda.size());
  for (int j = 0; j < lambda.size(); ++j) {
    const double lj = lambda[j];
    double g = -4.0 * lj / (t2 + lj * lj);
    if (cfg.alpha > 0.0)
      g -= huber_weight * cfg.alpha * huber_prime(cfg.alpha * lj);
    out[j] = g;
  }
}

double log_density_unnorm(const Eigen::VectorXd& lambda,
                          const PriorConfig& cfg) {
  cfg.validate();
  if (lambda.size() != cfg.dim)
    throw std::invalid_argument("prior: lambda dimension mismatch");
  if (lambda.lpNorm<1>() > cfg.radius)
    return -std::numeric_limits<double>::infinity();
  return log_prior_terms(lambda, cfg, 1.0);
}

Eigen::VectorXd grad_log_density(const Eigen::VectorXd& lambda,
                                 const PriorConfig& cfg) {
  cfg.validate();
  if (lambda.size() != cfg.dim)
    throw std::invalid_argument("prior: lambda dimension mismatch");
  if (!(lambda.lpNorm<1>() < cfg.radius))
    throw std::invalid_argument(
        "prior: gradient undefined on or outside the l1 ball");
  Eigen::VectorXd g;
  grad_prior_terms(lambda, cfg, 1.0, g);
  return g;
}

Eigen::VectorXd sample(const PriorConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.alpha != 0.0)
    throw std::invalid_argument(
        "prior: exact sampling implemented for alpha = 0 only");
  Eigen::VectorXd lambda(cfg.dim);
  for (std::uint64_t attempt = 0; attempt < kRejectionCap; ++attempt) {
    double l1 = 0.0;
    for (int j = 0; j < cfg.dim; ++j) {
      lambda[j] = cfg.tau * rng.student_t3_scaled();
      l1 += std::abs(lambda[j]);
    }
    if (l1 <= cfg.radius) return lambda;
  }
  throw std::runtime_error(
      "prior: rejection cap exhausted (radius too small for tau * dim)");
}

Eigen::MatrixXd sample_many(const PriorConfig& cfg, int count, Rng& rng,
                            std::uint64_t* attempts_out) {
  cfg.validate();
  if (cfg.alpha != 0.0)
    throw std::invalid_argument(
        "prior: exact sampling implemented for alpha = 0 only");
  if (count < 1) throw std::invalid_argument("prior: sample count must be >= 1");
  Eigen::MatrixXd out(count, cfg.dim);
  Eigen::VectorXd lambda(cfg.dim);
  std::uint64_t attempts = 0;
  for (int s = 0; s < count; ++s) {
    std::uint64_t local = 0;
    for (;;) {
      if (++local > kRejectionCap)
        throw std::runtime_error(
            "prior: rejection cap exhausted (radius too small for tau * dim)");
      double l1 = 0.0;
      for (int j = 0; j < cfg.dim; ++j) {
        lambda[j] = cfg.tau * rng.student_t3_scaled();
        l1 += std::abs(lambda[j]);
      }
      if (l1 <= cfg.radius) break;
    }
    attempts += local;
    out.row(s) = lambda;
  }
  if (attempts_out) *attempts_out = attempts;
  return out;
}

double tail_mass_bound(int m, double s) {
  if (m < 1) throw std::invalid_argument("tail_mass_bound: M must be >= 1");
  if (!(s > static_cast<double>(m)))
    throw std::invalid_argument("tail_mass_bound: requires s > M");
  const double d = s - static_cast<double>(m);
  return static_cast<double>(m) / (d * d);
}

}  // namespace masp
