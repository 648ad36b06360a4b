#include "masp/aggregate.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace masp {

FitMethod fit_method_from_string(const std::string& s) {
  if (s == "quadrature") return FitMethod::Quadrature;
  if (s == "rejection") return FitMethod::Rejection;
  if (s == "langevin") return FitMethod::Langevin;
  throw std::invalid_argument("unknown method: " + s);
}

std::string to_string(FitMethod method) {
  switch (method) {
    case FitMethod::Quadrature: return "quadrature";
    case FitMethod::Rejection: return "rejection";
    case FitMethod::Langevin: return "langevin";
  }
  return "?";
}

double cumulative_q(const Dataset& data, const LossModel& model,
                    const Dictionary& dict, const Eigen::VectorXd& lambda,
                    int m) {
  data.validate(task_of(model.kind));
  if (m < 0 || m > data.n())
    throw std::invalid_argument("cumulative_q: m out of range");
  const Eigen::MatrixXd* gram = dict.gram ? &*dict.gram : nullptr;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd phi = dict.row(data.x.row(i).transpose());
    const double y = data.y.size() ? data.y[i] : 0.0;
    acc += q_value_row(model, phi, y, lambda, gram);
  }
  return acc;
}

double predict(const Dictionary& dict, const Eigen::VectorXd& lambda,
               const Eigen::VectorXd& x) {
  return dict.predict(lambda, x);
}

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& logw) {
  if (logw.size() == 0)
    throw std::invalid_argument("normalize_log_weights: empty");
  const double top = logw.maxCoeff();
  if (!std::isfinite(top))
    throw std::runtime_error(
        "normalize_log_weights: no finite weight (all mass underflowed)");
  Eigen::VectorXd w = (logw.array() - top).exp();
  const double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("normalize_log_weights: zero or non-finite mass");
  w /= total;
  return w;
}

namespace {

// pool of candidate vectors with fixed base log-weights (log prior * trapezoid
// mass for quadrature, zero for draws already distributed as the prior)
struct Pool {
  Eigen::MatrixXd lambdas;    // S x M
  Eigen::VectorXd base_logw;  // S
  double ball_occupancy = 1.0;
};

Pool build_rejection_pool(const PriorConfig& prior, const ExactBudget& budget,
                          std::uint64_t seed) {
  Pool pool;
  Rng rng(seed);
  std::uint64_t attempts = 0;
  pool.lambdas = sample_many(prior, budget.samples, rng, &attempts);
  pool.base_logw = Eigen::VectorXd::Zero(budget.samples);
  pool.ball_occupancy =
      static_cast<double>(budget.samples) / static_cast<double>(attempts);
  return pool;
}

// Tensor-product trapezoid grid over [-R, R]^M restricted to the l1 ball.
// Geometry is computed on the scale-free grid g in [-1, 1]^M so the node set,
// the ball mask and the relative weights are bit-identical across problems
// that differ only by radius; only the node coordinates carry the scale.
Pool build_quadrature_pool(const PriorConfig& prior, const ExactBudget& budget) {
  const int k = budget.grid_points;
  if (k < 3) throw std::invalid_argument("quadrature: need >= 3 grid points");
  const int m = prior.dim;
  Eigen::VectorXd rel(k), axis_w(k);
  for (int i = 0; i < k; ++i) {
    rel[i] = -1.0 + 2.0 * i / (k - 1);
    axis_w[i] = (i == 0 || i == k - 1) ? 0.5 : 1.0;
  }
  const double spacing = 2.0 * prior.radius / (k - 1);

  std::vector<int> idx(m, 0);
  const std::int64_t total = static_cast<std::int64_t>(std::pow(k, m));
  std::vector<double> lam, lw;
  std::int64_t kept = 0;
  for (std::int64_t node = 0; node < total; ++node) {
    double rel_l1 = 0.0;
    for (int j = 0; j < m; ++j) rel_l1 += std::abs(rel[idx[j]]);
    if (rel_l1 <= 1.0 + 1e-12) {
      ++kept;
      double logw = 0.0;
      for (int j = 0; j < m; ++j) {
        const double l = prior.radius * rel[idx[j]];
        lam.push_back(l);
        logw += std::log(axis_w[idx[j]] * spacing) -
                2.0 * std::log(prior.tau * prior.tau + l * l);
      }
      lw.push_back(logw);
    }
    for (int j = m - 1; j >= 0; --j) {
      if (++idx[j] < k) break;
      idx[j] = 0;
    }
  }
  Pool pool;
  pool.lambdas = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic,
                                          Eigen::Dynamic, Eigen::RowMajor>>(
      lam.data(), kept, m);
  pool.base_logw = Eigen::Map<Eigen::VectorXd>(lw.data(), kept);
  pool.ball_occupancy = static_cast<double>(kept) / static_cast<double>(total);
  return pool;
}

void add_stage_q(const LossModel& model, const Eigen::VectorXd& phi, double y,
                 const Pool& pool, const Eigen::VectorXd& qform,
                 Eigen::VectorXd& cumq) {
  const Eigen::VectorXd pred = pool.lambdas * phi;
  switch (model.kind) {
    case LossKind::RegSquared:
      cumq.array() += (y - pred.array()).square();
      return;
    case LossKind::DensityL2:
      cumq.array() += qform.array() - 2.0 * pred.array();
      return;
    case LossKind::Hinge:
      cumq.array() += (1.0 - y * pred.array()).max(0.0);
      return;
    case LossKind::PhiSquared:
      cumq.array() += (1.0 - y * pred.array()).square();
      return;
    case LossKind::PhiTruncated:
      cumq.array() += (1.0 - y * pred.array()).max(0.0).square();
      return;
    case LossKind::PhiBoosting:
      cumq.array() += (-y * pred.array()).exp();
      return;
    case LossKind::PhiLogit:
      cumq = cumq.array() +
             (-y * pred.array()).unaryExpr([](double u) {
               return u > 0.0 ? u + std::log1p(std::exp(-u))
                              : std::log1p(std::exp(u));
             });
      return;
  }
  throw std::logic_error("add_stage_q: unknown loss kind");
}

struct ExactRun {
  Eigen::MatrixXd stage_means;  // (n+1) x M
  std::vector<double> stage_ess;
  double ball_occupancy = 1.0;
  Eigen::VectorXd ma_standard_error;  // empty for quadrature
};

ExactRun run_exact(const Dataset& data, const LossModel& model,
                   const Dictionary& dict, const PriorConfig& prior,
                   double beta, FitMethod method, const ExactBudget& budget,
                   std::uint64_t seed) {
  data.validate(task_of(model.kind));
  dict.validate();
  prior.validate();
  if (prior.dim != dict.size)
    throw std::invalid_argument("ma_exact: prior dim != dictionary size");
  if (!(beta > 0.0)) throw std::invalid_argument("ma_exact: beta must be > 0");
  if (prior.alpha != 0.0)
    throw std::invalid_argument("ma_exact: exact routes require alpha = 0");
  if (method == FitMethod::Quadrature && prior.dim > 2)
    throw std::invalid_argument("ma_exact: quadrature is limited to M <= 2");
  if (method == FitMethod::Rejection && prior.dim > 8)
    throw std::invalid_argument("ma_exact: rejection is limited to M <= 8");
  if (model.kind == LossKind::DensityL2 && !dict.gram)
    throw std::invalid_argument("ma_exact: density loss needs a Gram");

  Pool pool = method == FitMethod::Quadrature
                  ? build_quadrature_pool(prior, budget)
                  : build_rejection_pool(prior, budget, seed);
  const int s = static_cast<int>(pool.lambdas.rows());
  const int n = data.n();
  const int m_dim = prior.dim;

  const Eigen::MatrixXd phi_rows =
      n > 0 ? dict.rows(data.x) : Eigen::MatrixXd(0, m_dim);

  // per-candidate quadratic form, reused by every density stage
  Eigen::VectorXd qform;
  if (model.kind == LossKind::DensityL2)
    qform = ((pool.lambdas * *dict.gram).array() * pool.lambdas.array())
                .rowwise()
                .sum();

  ExactRun run;
  run.stage_means.resize(n + 1, m_dim);
  run.stage_ess.resize(n + 1);
  run.ball_occupancy = pool.ball_occupancy;

  const bool want_se = method == FitMethod::Rejection;
  Eigen::MatrixXd influence;
  if (want_se) influence = Eigen::MatrixXd::Zero(s, m_dim);

  Eigen::VectorXd cumq = Eigen::VectorXd::Zero(s);
  for (int m = 0; m <= n; ++m) {
    if (m > 0) {
      const double y = data.y.size() ? data.y[m - 1] : 0.0;
      add_stage_q(model, phi_rows.row(m - 1).transpose(), y, pool, qform, cumq);
    }
    Eigen::VectorXd w;
    try {
      w = normalize_log_weights(pool.base_logw - cumq / beta);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("ma_exact stage " + std::to_string(m) + ": " +
                               e.what());
    }
    const Eigen::VectorXd mean = pool.lambdas.transpose() * w;
    run.stage_means.row(m) = mean.transpose();
    run.stage_ess[m] = 1.0 / w.squaredNorm();
    if (want_se)
      influence.noalias() +=
          w.asDiagonal() * (pool.lambdas.rowwise() - mean.transpose()) /
          static_cast<double>(n + 1);
  }
  if (want_se)
    run.ma_standard_error = influence.array().square().colwise().sum().sqrt();
  return run;
}

AggregateResult finish(const Dataset& data, const Dictionary& dict,
                       const PriorConfig& prior, FitMethod method,
                       const ExactBudget& budget, ExactRun&& run, bool ewa,
                       double wall_seconds) {
  AggregateResult res;
  res.method = method;
  res.lambda_hat = ewa ? run.stage_means.row(data.n()).transpose()
                       : run.stage_means.colwise().mean().transpose().eval();
  res.diag.stage_ess = std::move(run.stage_ess);
  res.diag.ball_occupancy = run.ball_occupancy;
  res.diag.wall_seconds = wall_seconds;
  if (budget.keep_stage_means) res.diag.stage_means = std::move(run.stage_means);
  if (run.ma_standard_error.size() && !ewa)
    res.diag.standard_error = std::move(run.ma_standard_error);
  (void)dict;
  if (res.lambda_hat.lpNorm<1>() > prior.radius + 1e-9)
    throw std::logic_error("aggregate: estimate escaped the l1 ball");
  return res;
}

}  // namespace

AggregateResult ma_exact(const Dataset& data, const LossModel& model,
                         const Dictionary& dict, const PriorConfig& prior,
                         double beta, FitMethod method,
                         const ExactBudget& budget, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ExactRun run = run_exact(data, model, dict, prior, beta, method, budget, seed);
  const double dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return finish(data, dict, prior, method, budget, std::move(run), false, dt);
}

AggregateResult ewa_exact(const Dataset& data, const LossModel& model,
                          const Dictionary& dict, const PriorConfig& prior,
                          double beta, FitMethod method,
                          const ExactBudget& budget, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ExactRun run = run_exact(data, model, dict, prior, beta, method, budget, seed);
  const double dt = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return finish(data, dict, prior, method, budget, std::move(run), true, dt);
}

}  // namespace masp
