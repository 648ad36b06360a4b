#include "masp/langevin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace masp {

double LangevinConfig::resolved_step(double tau) const {
  if (step > 0.0) return step;
  return std::min(1e-3, tau * tau / 10.0);
}

void LangevinConfig::validate(double tau) const {
  const double h = resolved_step(tau);
  if (!(h > 0.0)) throw std::invalid_argument("langevin: step must be > 0");
  if (!(total_time > 0.0))
    throw std::invalid_argument("langevin: total_time must be > 0");
  if (std::floor(total_time / h) < 10.0)
    throw std::invalid_argument("langevin: fewer than 10 states (T/h < 10)");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw std::invalid_argument("langevin: burn_in must lie in [0, 1)");
  if (threads < 1) throw std::invalid_argument("langevin: threads must be >= 1");
}

PotentialEvaluator::PotentialEvaluator(const Dataset& data,
                                       const LossModel& model,
                                       const Dictionary& dict,
                                       const PriorConfig& prior, double beta)
    : model_(model), prior_(prior), beta_(beta), n_(data.n()) {
  data.validate(task_of(model.kind));
  dict.validate();
  prior.validate();
  if (prior.dim != dict.size)
    throw std::invalid_argument("potential: prior dim != dictionary size");
  if (!(beta > 0.0)) throw std::invalid_argument("potential: beta must be > 0");

  const int m = dict.size;
  const Eigen::MatrixXd rows =
      n_ > 0 ? dict.rows(data.x) : Eigen::MatrixXd(0, m);

  switch (model.kind) {
    case LossKind::RegSquared: {
      xx_.assign(n_ + 1, Eigen::MatrixXd::Zero(m, m));
      xy_ = Eigen::MatrixXd::Zero(n_ + 1, m);
      yy_ = Eigen::VectorXd::Zero(n_ + 1);
      for (int i = 0; i < n_; ++i) {
        xx_[i + 1] = xx_[i] + rows.row(i).transpose() * rows.row(i);
        xy_.row(i + 1) = xy_.row(i) + data.y[i] * rows.row(i);
        yy_[i + 1] = yy_[i] + data.y[i] * data.y[i];
      }
      return;
    }
    case LossKind::DensityL2: {
      if (!dict.gram)
        throw std::invalid_argument("potential: density loss needs a Gram");
      gram_ = *dict.gram;
      phi_sum_ = Eigen::MatrixXd::Zero(n_ + 1, m);
      for (int i = 0; i < n_; ++i)
        phi_sum_.row(i + 1) = phi_sum_.row(i) + rows.row(i);
      return;
    }
    case LossKind::Hinge:
      // On dictionaries with R * L_phi <= 1 the margin 1 - y g stays
      // non-negative on the whole ball, so the hinge restricted there is the
      // linear function 1 - y g; that linear form is extended to all of R^M
      // as the sampling potential (coordinates then decouple).
      if (prior.radius * dict.sup_bound() <= 1.0) {
        hinge_linear_ = true;
        yphi_sum_ = Eigen::MatrixXd::Zero(n_ + 1, m);
        for (int i = 0; i < n_; ++i)
          yphi_sum_.row(i + 1) = yphi_sum_.row(i) + data.y[i] * rows.row(i);
        return;
      }
      [[fallthrough]];
    default:
      phi_rows_ = rows;
      labels_ = data.y;
      return;
  }
}

namespace {

double margin_value(LossKind kind, double u) {
  switch (kind) {
    case LossKind::PhiSquared: {
      const double a = 1.0 + u;
      return a * a;
    }
    case LossKind::PhiTruncated: {
      const double a = std::max(1.0 + u, 0.0);
      return a * a;
    }
    case LossKind::PhiBoosting:
      return std::exp(u);
    case LossKind::PhiLogit:
      return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    default:
      throw std::logic_error("margin_value: unexpected kind");
  }
}

double margin_deriv(LossKind kind, double u) {
  switch (kind) {
    case LossKind::PhiSquared:
      return 2.0 * (1.0 + u);
    case LossKind::PhiTruncated:
      return 2.0 * std::max(1.0 + u, 0.0);
    case LossKind::PhiBoosting:
      return std::exp(u);
    case LossKind::PhiLogit:
      return u > 0.0 ? 1.0 / (1.0 + std::exp(-u))
                     : std::exp(u) / (1.0 + std::exp(u));
    default:
      throw std::logic_error("margin_deriv: unexpected kind");
  }
}

}  // namespace

double PotentialEvaluator::value(const Eigen::VectorXd& lambda, int m) const {
  if (m < 0 || m > n_) throw std::invalid_argument("potential: m out of range");
  if (lambda.size() != prior_.dim)
    throw std::invalid_argument("potential: lambda dimension mismatch");
  double data_term = 0.0;
  switch (model_.kind) {
    case LossKind::RegSquared:
      data_term = lambda.dot(xx_[m] * lambda) -
                  2.0 * xy_.row(m).dot(lambda) + yy_[m];
      break;
    case LossKind::DensityL2:
      data_term = m * lambda.dot(gram_ * lambda) -
                  2.0 * phi_sum_.row(m).dot(lambda);
      break;
    case LossKind::Hinge:
      if (hinge_linear_) {
        data_term = static_cast<double>(m) - yphi_sum_.row(m).dot(lambda);
      } else {
        const Eigen::VectorXd pred = phi_rows_.topRows(m) * lambda;
        for (int i = 0; i < m; ++i)
          data_term += k_eps(1.0 - labels_[i] * pred[i], model_.hinge_eps);
      }
      break;
    default: {
      const Eigen::VectorXd pred = phi_rows_.topRows(m) * lambda;
      for (int i = 0; i < m; ++i)
        data_term += margin_value(model_.kind, -labels_[i] * pred[i]);
      break;
    }
  }
  return -data_term / beta_ + log_prior_terms(lambda, prior_, 2.0);
}

void PotentialEvaluator::grad(const Eigen::VectorXd& lambda, int m,
                              Eigen::VectorXd& out) const {
  if (m < 0 || m > n_) throw std::invalid_argument("potential: m out of range");
  if (lambda.size() != prior_.dim)
    throw std::invalid_argument("potential: lambda dimension mismatch");
  grad_prior_terms(lambda, prior_, 2.0, out);
  const double inv_beta = 1.0 / beta_;
  switch (model_.kind) {
    case LossKind::RegSquared:
      out.noalias() -= (2.0 * inv_beta) * (xx_[m] * lambda);
      out.noalias() += (2.0 * inv_beta) * xy_.row(m).transpose();
      return;
    case LossKind::DensityL2:
      out.noalias() -= (2.0 * m * inv_beta) * (gram_ * lambda);
      out.noalias() += (2.0 * inv_beta) * phi_sum_.row(m).transpose();
      return;
    case LossKind::Hinge:
      if (hinge_linear_) {
        out.noalias() += inv_beta * yphi_sum_.row(m).transpose();
      } else {
        const Eigen::VectorXd pred = phi_rows_.topRows(m) * lambda;
        Eigen::VectorXd coef(m);
        for (int i = 0; i < m; ++i)
          coef[i] = labels_[i] * k_eps_prime(1.0 - labels_[i] * pred[i],
                                             model_.hinge_eps);
        out.noalias() += inv_beta * (phi_rows_.topRows(m).transpose() * coef);
      }
      return;
    default: {
      const Eigen::VectorXd pred = phi_rows_.topRows(m) * lambda;
      Eigen::VectorXd coef(m);
      for (int i = 0; i < m; ++i)
        coef[i] =
            labels_[i] * margin_deriv(model_.kind, -labels_[i] * pred[i]);
      out.noalias() += inv_beta * (phi_rows_.topRows(m).transpose() * coef);
      return;
    }
  }
}

double potential(const Dataset& data, const LossModel& model,
                 const Dictionary& dict, const PriorConfig& prior, double beta,
                 const Eigen::VectorXd& lambda, int m) {
  return PotentialEvaluator(data, model, dict, prior, beta).value(lambda, m);
}

Eigen::VectorXd grad_potential(const Dataset& data, const LossModel& model,
                               const Dictionary& dict, const PriorConfig& prior,
                               double beta, const Eigen::VectorXd& lambda,
                               int m) {
  Eigen::VectorXd out;
  PotentialEvaluator(data, model, dict, prior, beta).grad(lambda, m, out);
  return out;
}

Eigen::MatrixXd run_chain(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& grad,
    double step, double total_time, int dim, Rng& rng) {
  if (!(step > 0.0) || !(total_time > 0.0) || dim < 1)
    throw std::invalid_argument("run_chain: bad step, horizon or dimension");
  const std::int64_t k = static_cast<std::int64_t>(total_time / step);
  if (k < 10) throw std::invalid_argument("run_chain: fewer than 10 states");
  Eigen::MatrixXd states(k, dim);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd g(dim);
  const double noise_scale = std::sqrt(2.0 * step);
  states.row(0).setZero();
  for (std::int64_t i = 1; i < k; ++i) {
    grad(x, g);
    for (int j = 0; j < dim; ++j)
      x[j] += step * g[j] + noise_scale * rng.normal();
    if (!x.allFinite())
      throw std::runtime_error("run_chain: non-finite state at step " +
                               std::to_string(i));
    states.row(i) = x.transpose();
  }
  return states;
}

RatioEstimate ratio_estimate(const Eigen::MatrixXd& states, double radius,
                             double burn_in) {
  if (!(radius > 0.0))
    throw std::invalid_argument("ratio_estimate: radius must be > 0");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw std::invalid_argument("ratio_estimate: burn_in must lie in [0, 1)");
  const std::int64_t k = states.rows();
  if (k < 1) throw std::invalid_argument("ratio_estimate: no states");
  const std::int64_t start = static_cast<std::int64_t>(burn_in * k);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(states.cols());
  std::int64_t inside = 0;
  for (std::int64_t i = start; i < k; ++i) {
    if (states.row(i).lpNorm<1>() <= radius) {
      acc += states.row(i).transpose();
      ++inside;
    }
  }
  if (inside == 0)
    throw std::runtime_error(
        "ratio_estimate: no state inside the l1 ball after burn-in");
  return {acc / static_cast<double>(inside),
          static_cast<double>(inside) / static_cast<double>(k - start)};
}

namespace {

AggregateResult langevin_aggregate(const Dataset& data, const LossModel& model,
                                   const Dictionary& dict,
                                   const PriorConfig& prior, double beta,
                                   const LangevinConfig& cfg, bool ewa) {
  const auto t0 = std::chrono::steady_clock::now();
  prior.validate();
  if (prior.dim < 2)
    throw std::invalid_argument("ma_langevin: requires M >= 2");
  cfg.validate(prior.tau);
  const double h = cfg.resolved_step(prior.tau);
  const PotentialEvaluator pot(data, model, dict, prior, beta);

  const int n = data.n();
  const int first_stage = ewa ? n : 0;
  const int stages = n - first_stage + 1;

  Eigen::MatrixXd stage_means(stages, prior.dim);
  std::vector<double> occupancy(stages);
  std::string failure;

  // Stages are independent chains with index-derived seeds, so any thread
  // count gives the same numbers.
  const int workers = std::min(cfg.threads, stages);
  std::vector<std::thread> threads;
  std::mutex fail_mu;
  auto work = [&](int w) {
    Eigen::VectorXd g(pot.dim());
    for (int idx = w; idx < stages; idx += workers) {
      const int m = first_stage + idx;
      try {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(m)));
        const Eigen::MatrixXd states = run_chain(
            [&pot, m](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
              pot.grad(x, m, out);
            },
            h, cfg.total_time, pot.dim(), rng);
        const RatioEstimate est =
            ratio_estimate(states, prior.radius, cfg.burn_in);
        stage_means.row(idx) = est.mean.transpose();
        occupancy[idx] = est.occupancy;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (failure.empty())
          failure = "stage " + std::to_string(m) + ": " + e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (!failure.empty()) throw std::runtime_error("ma_langevin " + failure);

  AggregateResult res;
  res.method = FitMethod::Langevin;
  res.lambda_hat = stage_means.colwise().mean().transpose();
  res.diag.stage_occupancy = std::move(occupancy);
  res.diag.ball_occupancy = *std::min_element(res.diag.stage_occupancy.begin(),
                                              res.diag.stage_occupancy.end());
  res.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (res.lambda_hat.lpNorm<1>() > prior.radius + 1e-9)
    throw std::logic_error("ma_langevin: estimate escaped the l1 ball");
  return res;
}

}  // namespace

AggregateResult ma_langevin(const Dataset& data, const LossModel& model,
                            const Dictionary& dict, const PriorConfig& prior,
                            double beta, const LangevinConfig& cfg) {
  return langevin_aggregate(data, model, dict, prior, beta, cfg, false);
}

AggregateResult ewa_langevin(const Dataset& data, const LossModel& model,
                             const Dictionary& dict, const PriorConfig& prior,
                             double beta, const LangevinConfig& cfg) {
  return langevin_aggregate(data, model, dict, prior, beta, cfg, true);
}

void dump_trajectory_csv(const std::string& path, const Eigen::MatrixXd& states,
                         double radius) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory: " + path);
  out << "step";
  for (int j = 0; j < states.cols(); ++j) out << ",lambda_" << (j + 1);
  out << ",in_ball\n";
  char buf[40];
  for (int i = 0; i < states.rows(); ++i) {
    out << i;
    for (int j = 0; j < states.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", states(i, j));
      out << ',' << buf;
    }
    out << ',' << (states.row(i).lpNorm<1>() <= radius ? 1 : 0) << '\n';
  }
}

}  // namespace masp
