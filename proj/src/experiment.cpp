#include "masp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "masp/langevin.hpp"
#include "masp/prior.hpp"

namespace masp {
namespace {

Dictionary dictionary_for_task(Task task, int m) {
  switch (task) {
    case Task::Regression: return make_coordinate_dictionary(m);
    case Task::Density: return make_trig_dictionary(m);
    case Task::Classification: return make_stump_dictionary(m);
  }
  throw std::logic_error("dictionary_for_task: unknown task");
}

TuningInputs tuning_inputs(const ExperimentConfig& cfg, const Problem& prob,
                           const ResolvedTuning& t) {
  TuningInputs in;
  in.beta = t.beta;
  in.n = prob.train.n();
  in.m = cfg.dict_size;
  in.radius = t.radius;
  in.trace_gram = prob.dict.trace_gram();
  in.sigma2 = cfg.noise_sigma * cfg.noise_sigma;
  in.l_density = prob.dict.sup_bound();
  in.l_phi = prob.dict.sup_bound();
  in.m_star = cfg.sparsity_hat > 0 ? cfg.sparsity_hat : std::max(cfg.sparsity, 1);
  return in;
}

AggregateResult fit_problem(const ExperimentConfig& cfg, const Dataset& data,
                            const Dictionary& dict, const ResolvedTuning& t,
                            std::uint64_t seed, int fit_threads) {
  PriorConfig prior;
  prior.tau = t.tau;
  prior.radius = t.radius;
  prior.alpha = t.alpha;
  prior.dim = dict.size;
  LossModel model;
  model.kind = cfg.loss;
  model.hinge_eps = cfg.hinge_eps;

  if (cfg.method == FitMethod::Langevin) {
    LangevinConfig lc;
    lc.step = cfg.step > 0.0 ? cfg.step : lc.resolved_step(t.tau);
    lc.total_time = cfg.chain_steps * lc.step;
    lc.burn_in = cfg.burn_in;
    lc.seed = seed;
    lc.threads = fit_threads;
    return cfg.ewa_only ? ewa_langevin(data, model, dict, prior, t.beta, lc)
                        : ma_langevin(data, model, dict, prior, t.beta, lc);
  }
  ExactBudget budget;
  budget.samples = cfg.samples;
  budget.grid_points = cfg.grid_points;
  return cfg.ewa_only
             ? ewa_exact(data, model, dict, prior, t.beta, cfg.method, budget, seed)
             : ma_exact(data, model, dict, prior, t.beta, cfg.method, budget, seed);
}

}  // namespace

Problem generate_problem(const ExperimentConfig& cfg, int rep) {
  Rng rng(derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)), 0));
  switch (cfg.task) {
    case Task::Regression:
      return gen_sparse_regression(cfg.n, cfg.dict_size, cfg.sparsity,
                                   cfg.noise_sigma, cfg.signal_l1, cfg.design,
                                   rng);
    case Task::Density:
      return gen_density(cfg.n, cfg.dict_size, cfg.sparsity,
                         cfg.coef_magnitude, rng);
    case Task::Classification:
      return gen_classification(cfg.n, cfg.dict_size, cfg.sparsity,
                                cfg.coef_magnitude, rng);
  }
  throw std::logic_error("generate_problem: unknown task");
}

ResolvedTuning resolve_tuning(const ExperimentConfig& cfg, const Problem& prob) {
  ResolvedTuning t;
  t.alpha = cfg.alpha;
  if (cfg.radius > 0.0) {
    t.radius = cfg.radius;
  } else {
    switch (cfg.task) {
      case Task::Regression:
        t.radius = data_driven_radius(
            prob.train.y, cfg.noise_sigma * cfg.noise_sigma,
            cfg.sparsity_hat > 0 ? cfg.sparsity_hat : std::max(cfg.sparsity, 1));
        if (t.radius <= 0.0)
          throw std::runtime_error(
              "data-driven radius came out zero; set radius explicitly");
        break;
      case Task::Density: t.radius = 4.0; break;
      case Task::Classification:
        t.radius = cfg.loss == LossKind::Hinge ? 1.0 : 2.0;
        break;
    }
  }
  TuningInputs in = tuning_inputs(cfg, prob, t);
  in.radius = t.radius;
  t.beta = cfg.beta > 0.0 ? cfg.beta
                          : choose_beta(cfg.loss, in, cfg.density_beta_shortcut);
  in.beta = t.beta;
  t.tau = cfg.tau > 0.0 ? cfg.tau : choose_tau(in, cfg.tau_trace);
  return t;
}

ReplicationRow run_replication(const ExperimentConfig& cfg, int rep) {
  ReplicationRow row;
  row.rep = rep;
  row.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  try {
    const Problem prob = generate_problem(cfg, rep);
    const ResolvedTuning t = resolve_tuning(cfg, prob);
    row.beta = t.beta;
    row.tau = t.tau;
    row.radius = t.radius;

    const int fit_threads = cfg.replications == 1 ? cfg.threads : 1;
    const AggregateResult agg = fit_problem(cfg, prob.train, prob.dict, t,
                                            derive_seed(row.seed, 1), fit_threads);
    row.lambda_l1 = agg.lambda_hat.lpNorm<1>();
    row.occupancy = agg.diag.ball_occupancy;
    if (!agg.diag.stage_ess.empty())
      row.ess_min = *std::min_element(agg.diag.stage_ess.begin(),
                                      agg.diag.stage_ess.end());

    LossModel model;
    model.kind = cfg.loss;
    model.hinge_eps = cfg.hinge_eps;
    Rng eval_rng(derive_seed(row.seed, 2));
    switch (cfg.task) {
      case Task::Regression: {
        const Eigen::MatrixXd eval_x =
            prob.fresh_covariates(cfg.eval_points, eval_rng);
        row.risk = regression_risk(prob.dict, agg.lambda_hat, prob.lambda_star,
                                   eval_x);
        row.oracle_risk = 0.0;
        break;
      }
      case Task::Density:
        row.risk = density_ise(*prob.dict.gram, agg.lambda_hat, prob.lambda_star);
        row.oracle_risk = 0.0;
        break;
      case Task::Classification: {
        const Eigen::MatrixXd eval_x =
            prob.fresh_covariates(cfg.eval_points, eval_rng);
        const auto eta = [&prob](const Eigen::VectorXd& x) { return prob.eta(x); };
        const ClassificationRisk hat = classification_risk(
            model, prob.dict, agg.lambda_hat, eta, eval_x);
        const ClassificationRisk star = classification_risk(
            model, prob.dict, prob.lambda_star, eta, eval_x);
        row.risk = hat.excess_phi;
        row.misclass = hat.excess_misclass;
        row.oracle_risk = star.excess_phi;
        break;
      }
    }

    TuningInputs in = tuning_inputs(cfg, prob, t);
    try {
      if (cfg.task == Task::Classification) {
        if (cfg.loss == LossKind::Hinge) {
          row.bound = hinge_bound(row.oracle_risk, prob.lambda_star, in, t.tau);
        } else {
          const PhiSpec spec = phi_registry(cfg.loss, t.radius, in.l_phi);
          row.bound = classif_bound(row.oracle_risk, prob.lambda_star, in, t.tau,
                                    spec, prob.dict.gram->diagonal());
        }
      } else {
        row.bound = soi_bound(row.oracle_risk, prob.lambda_star, in, t.tau,
                              SparsityBoundForm::Full);
      }
    } catch (const std::invalid_argument& e) {
      row.note = std::string("bound skipped: ") + e.what();
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.note = e.what();
  }
  return row;
}

Summary summarize(const std::vector<ReplicationRow>& rows) {
  Summary s;
  double risk_sum = 0.0, risk_sq = 0.0, mis_sum = 0.0, bound_sum = 0.0;
  int k = 0, mis_k = 0, bound_k = 0;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    ++k;
    risk_sum += row.risk;
    risk_sq += row.risk * row.risk;
    if (std::isfinite(row.misclass)) {
      ++mis_k;
      mis_sum += row.misclass;
    }
    if (std::isfinite(row.bound)) {
      ++bound_k;
      bound_sum += row.bound;
    }
  }
  s.replications_ok = k;
  if (k >= 1) {
    s.mean_risk = risk_sum / k;
    const double var =
        k >= 2 ? std::max(0.0, (risk_sq - k * s.mean_risk * s.mean_risk) / (k - 1))
               : 0.0;
    s.se_risk = std::sqrt(var / k);
  }
  if (mis_k >= 1) s.mean_misclass = mis_sum / mis_k;
  if (bound_k >= 1 && bound_k == k) {
    s.mean_bound = bound_sum / bound_k;
    s.bound_checked = true;
    s.bound_satisfied = s.mean_risk + 3.0 * s.se_risk <= s.mean_bound;
  }
  return s;
}

Report run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.config = cfg;
  report.rows.resize(static_cast<size_t>(cfg.replications));
  const int workers = std::max(1, std::min(cfg.threads, cfg.replications));
  if (workers == 1) {
    for (int r = 0; r < cfg.replications; ++r)
      report.rows[static_cast<size_t>(r)] = run_replication(cfg, r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < cfg.replications; r += workers)
          report.rows[static_cast<size_t>(r)] = run_replication(cfg, r);
      });
    }
    for (auto& th : pool) th.join();
  }
  report.summary = summarize(report.rows);
  report.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

AggregateResult fit_dataset(const ExperimentConfig& cfg, const Dataset& data,
                            ResolvedTuning& tuning_out) {
  data.validate(cfg.task);
  if (static_cast<int>(data.x.cols()) != cfg.dict_size &&
      cfg.task != Task::Density)
    throw ConfigError("dataset has " + std::to_string(data.x.cols()) +
                      " covariate columns but dict_size = " +
                      std::to_string(cfg.dict_size));
  if (cfg.task == Task::Density && data.x.cols() != 1)
    throw ConfigError("density data must have a single covariate column");

  Problem prob;
  prob.task = cfg.task;
  prob.train = data;
  prob.dict = dictionary_for_task(cfg.task, cfg.dict_size);
  if (cfg.task == Task::Density) {
    const int g = 2001;
    DensityGrid grid;
    grid.points.resize(g, 1);
    grid.weights.resize(g);
    const double dx = 1.0 / (g - 1);
    for (int k = 0; k < g; ++k) {
      grid.points(k, 0) = k * dx;
      grid.weights[k] = (k == 0 || k == g - 1) ? 0.5 * dx : dx;
    }
    prob.dict.gram = compute_gram(prob.dict, grid.points, grid.weights);
    prob.grid = std::move(grid);
  } else {
    prob.dict.gram = data.n() > 0
                         ? compute_gram(prob.dict, data.x)
                         : Eigen::MatrixXd::Identity(cfg.dict_size, cfg.dict_size)
                               .eval();
  }
  tuning_out = resolve_tuning(cfg, prob);
  return fit_problem(cfg, prob.train, prob.dict, tuning_out,
                     derive_seed(cfg.seed, 1), cfg.threads);
}

}  // namespace masp
