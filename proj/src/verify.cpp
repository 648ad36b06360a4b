#include "masp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "masp/aggregate.hpp"
#include "masp/config.hpp"
#include "masp/experiment.hpp"
#include "masp/generators.hpp"
#include "masp/langevin.hpp"
#include "masp/models.hpp"
#include "masp/prior.hpp"
#include "masp/report.hpp"
#include "masp/rng.hpp"
#include "masp/tuning.hpp"

namespace masp {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Check make_check(const std::string& name, bool pass, const std::string& detail) {
  return Check{name, pass, detail};
}

// ---------------------------------------------------------------- gradients

using Scalar = std::function<double(const Eigen::VectorXd&)>;
using Vector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// worst relative finite-difference error of `grad` against `value` over the
// supplied points; step scaled per coordinate
double max_fd_error(const Scalar& value, const Vector& grad,
                    const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Eigen::VectorXd g = grad(p);
    Eigen::VectorXd x = p;
    for (int j = 0; j < p.size(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
      const double keep = x[j];
      x[j] = keep + h;
      const double up = value(x);
      x[j] = keep - h;
      const double down = value(x);
      x[j] = keep;
      const double fd = (up - down) / (2.0 * h);
      const double scale = std::max(1.0, std::abs(g[j]));
      worst = std::max(worst, std::abs(fd - g[j]) / scale);
    }
  }
  return worst;
}

std::vector<Eigen::VectorXd> random_points(int count, int dim, double box,
                                           Rng& rng) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd p(dim);
    for (int j = 0; j < dim; ++j) p[j] = box * (2.0 * rng.uniform() - 1.0);
    pts.push_back(std::move(p));
  }
  return pts;
}

Check check_prior_gradient(Rng& rng) {
  PriorConfig prior;
  prior.tau = 0.3;
  prior.radius = 5.0;
  prior.alpha = 1.5;
  prior.dim = 4;
  // strictly interior points: |lambda|_1 <= 4 * 0.9 < radius
  const auto pts = random_points(100, prior.dim, 0.9, rng);
  const double err = max_fd_error(
      [&](const Eigen::VectorXd& l) { return log_density_unnorm(l, prior); },
      [&](const Eigen::VectorXd& l) { return grad_log_density(l, prior); }, pts);
  return make_check("gradients/prior", err <= 1e-6,
                    "max fd error " + fmt(err) + " (tol 1e-06)");
}

Check check_q_gradients(Rng& rng) {
  struct Case {
    LossKind kind;
    const char* name;
  };
  const Case cases[] = {
      {LossKind::RegSquared, "reg-squared"},   {LossKind::DensityL2, "density-l2"},
      {LossKind::PhiSquared, "phi-squared"},   {LossKind::PhiTruncated, "phi-truncated"},
      {LossKind::PhiBoosting, "phi-boosting"}, {LossKind::PhiLogit, "phi-logit"},
      {LossKind::Hinge, "hinge-smoothed"}};
  const int m = 4;
  Dictionary coord = make_coordinate_dictionary(m);
  Dictionary trig = make_trig_dictionary(m);
  {
    // grid Gram for the density loss
    const int g = 513;
    Eigen::MatrixXd pts(g, 1);
    Eigen::VectorXd w(g);
    for (int k = 0; k < g; ++k) {
      pts(k, 0) = static_cast<double>(k) / (g - 1);
      w[k] = (k == 0 || k == g - 1) ? 0.5 : 1.0;
    }
    w /= w.sum();
    trig.gram = compute_gram(trig, pts, w);
  }

  double worst = 0.0;
  std::string worst_name = "none";
  for (const auto& c : cases) {
    const bool density = c.kind == LossKind::DensityL2;
    const Dictionary& dict = density ? trig : coord;
    LossModel model;
    model.kind = c.kind;
    // central differences need the ramp's third derivative (~1/eps^2) small
    // relative to the tolerance; the gradient code is scale-free in eps
    model.hinge_eps = 0.05;
    const Eigen::MatrixXd* gram = density ? &*dict.gram : nullptr;

    int done = 0;
    double err = 0.0;
    while (done < 100) {
      Eigen::VectorXd x(density ? 1 : m);
      for (int j = 0; j < x.size(); ++j)
        x[j] = density ? rng.uniform() : 2.0 * rng.uniform() - 1.0;
      const double y = c.kind == LossKind::RegSquared
                           ? 2.0 * rng.uniform() - 1.0
                           : (rng.uniform() <= 0.5 ? 1.0 : -1.0);
      Eigen::VectorXd lambda(m);
      for (int j = 0; j < m; ++j) lambda[j] = 1.5 * (2.0 * rng.uniform() - 1.0);
      const Eigen::VectorXd phi = dict.row(x);
      if (c.kind == LossKind::PhiTruncated &&
          std::abs(1.0 - y * phi.dot(lambda)) < 1e-3)
        continue;  // second derivative jumps at the truncation point
      const auto value = [&](const Eigen::VectorXd& l) {
        return q_value_smoothed_row(model, phi, y, l, gram);
      };
      const auto grad = [&](const Eigen::VectorXd& l) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
        add_q_grad_row(model, phi, y, l, gram, out);
        return out;
      };
      err = std::max(err, max_fd_error(value, grad, {lambda}));
      ++done;
    }
    if (err > worst) {
      worst = err;
      worst_name = c.name;
    }
  }
  return make_check("gradients/q", worst <= 1e-6,
                    "max fd error " + fmt(worst) + " (" + worst_name +
                        ", tol 1e-06)");
}

Check check_potential_gradients(Rng& rng) {
  const int m = 3, n = 6;
  double worst = 0.0;
  std::string worst_name = "none";

  const LossKind kinds[] = {LossKind::RegSquared, LossKind::DensityL2,
                            LossKind::PhiSquared, LossKind::PhiTruncated,
                            LossKind::PhiBoosting, LossKind::PhiLogit,
                            LossKind::Hinge, LossKind::Hinge};
  int variant = 0;
  for (const LossKind kind : kinds) {
    const bool density = kind == LossKind::DensityL2;
    const bool hinge_general = kind == LossKind::Hinge && variant == 7;
    Dictionary dict = density ? make_trig_dictionary(m) : make_coordinate_dictionary(m);
    Dataset data;
    data.x.resize(n, density ? 1 : m);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < data.x.cols(); ++j)
        data.x(i, j) = density ? rng.uniform() : 2.0 * rng.uniform() - 1.0;
      data.y[i] = kind == LossKind::RegSquared ? rng.normal()
                                               : (rng.uniform() <= 0.5 ? 1.0 : -1.0);
    }
    if (density) {
      data.y.resize(0);
      dict.gram = Eigen::MatrixXd::Identity(m, m);
    }

    PriorConfig prior;
    prior.tau = 0.3;
    prior.dim = m;
    // hinge variants: radius 0.9 stays on the linear branch, 2.0 leaves it
    prior.radius = kind == LossKind::Hinge ? (hinge_general ? 2.0 : 0.9) : 2.0;
    prior.alpha = (variant % 2 == 0) ? 0.0 : 1.7;
    LossModel model;
    model.kind = kind;
    model.hinge_eps = 0.05;
    const double beta = 3.5;

    // reject points whose difference stencil straddles a curvature jump
    // (huber corner, truncation point); the gradient is exact there but
    // central differences are not
    const auto usable = [&](const Eigen::VectorXd& l) {
      if (prior.alpha > 0.0)
        for (int j = 0; j < m; ++j)
          if (std::abs(std::abs(prior.alpha * l[j]) - 1.0) < 1e-3) return false;
      if (kind == LossKind::PhiTruncated)
        for (int i = 0; i < n; ++i)
          if (std::abs(1.0 - data.y[i] * dict.row(data.x.row(i).transpose())
                                             .dot(l)) < 1e-3)
            return false;
      return true;
    };

    double err = 0.0;
    int done = 0;
    while (done < 100) {
      Eigen::VectorXd point(m);
      for (int j = 0; j < m; ++j) point[j] = 1.2 * (2.0 * rng.uniform() - 1.0);
      if (!usable(point)) continue;
      const int stage = done % 3 == 0 ? 0 : done % 3 == 1 ? n / 2 : n;
      err = std::max(
          err, max_fd_error(
                   [&](const Eigen::VectorXd& l) {
                     return potential(data, model, dict, prior, beta, l, stage);
                   },
                   [&](const Eigen::VectorXd& l) {
                     return grad_potential(data, model, dict, prior, beta, l, stage);
                   },
                   {point}));
      ++done;
    }
    if (err > worst) {
      worst = err;
      worst_name = to_string(kind) + (hinge_general ? "/general" : "") +
                   (prior.alpha > 0 ? "/huber" : "");
    }
    ++variant;
  }
  return make_check("gradients/potential", worst <= 1e-6,
                    "max fd error " + fmt(worst) + " (" + worst_name +
                        ", tol 1e-06)");
}

// ------------------------------------------------------------------ oracles

struct OracleProblem {
  Dataset data;
  Dictionary dict;
  PriorConfig prior;
  LossModel model;
  double beta = 0.0;
};

OracleProblem oracle_problem(int m, std::uint64_t seed) {
  Rng rng(seed);
  Problem p = gen_sparse_regression(20, m, 1, 0.5, 1.0, DesignKind::Rademacher, rng);
  OracleProblem op;
  op.data = p.train;
  op.dict = p.dict;
  op.model.kind = LossKind::RegSquared;
  op.prior.tau = 0.2;
  op.prior.radius = 2.0;
  op.prior.alpha = 0.0;
  op.prior.dim = m;
  TuningInputs in;
  in.sigma2 = 0.25;
  in.radius = 2.0;
  in.l_phi = op.dict.sup_bound();
  op.beta = choose_beta(LossKind::RegSquared, in);
  return op;
}

Check check_oracle_pair(int m) {
  const OracleProblem op = oracle_problem(m, 71 + static_cast<std::uint64_t>(m));
  ExactBudget budget;
  budget.grid_points = 801;
  budget.samples = 100000;
  const AggregateResult quad = ma_exact(op.data, op.model, op.dict, op.prior,
                                        op.beta, FitMethod::Quadrature, budget, 5);
  const AggregateResult rej = ma_exact(op.data, op.model, op.dict, op.prior,
                                       op.beta, FitMethod::Rejection, budget, 7);
  if (!rej.diag.standard_error)
    return make_check("oracles/pair-m" + std::to_string(m), false,
                      "rejection run reported no standard errors");
  double worst_gap = -1e300;
  bool ok = true;
  for (int j = 0; j < m; ++j) {
    const double gap = std::abs(quad.lambda_hat[j] - rej.lambda_hat[j]);
    const double allowed = 3.0 * (*rej.diag.standard_error)[j] + 1e-9;
    worst_gap = std::max(worst_gap, gap - allowed);
    ok = ok && gap <= allowed;
  }
  return make_check("oracles/pair-m" + std::to_string(m), ok,
                    "max (gap - 3se) " + fmt(worst_gap) + " (<= 0 passes)");
}

Check check_oracle_langevin() {
  const int m = 2;
  const OracleProblem op = oracle_problem(m, 73);
  ExactBudget budget;
  budget.grid_points = 801;
  const AggregateResult quad = ma_exact(op.data, op.model, op.dict, op.prior,
                                        op.beta, FitMethod::Quadrature, budget, 5);
  LangevinConfig lc;
  lc.step = 1e-4;
  lc.total_time = 200.0;
  lc.burn_in = 0.2;
  lc.seed = 11;
  const AggregateResult lang =
      ma_langevin(op.data, op.model, op.dict, op.prior, op.beta, lc);
  bool ok = true;
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const double gap = std::abs(lang.lambda_hat[j] - quad.lambda_hat[j]);
    const double allowed = std::max(0.01, 0.05 * std::abs(quad.lambda_hat[j]));
    worst = std::max(worst, gap / allowed);
    ok = ok && gap <= allowed;
  }
  return make_check("oracles/langevin-m2", ok,
                    "max gap/allowed " + fmt(worst) + " (<= 1 passes), occupancy " +
                        fmt(lang.diag.ball_occupancy));
}

// ------------------------------------------------------------------- bounds

Check bound_check_from_report(const std::string& name, const Report& rep) {
  const Summary& s = rep.summary;
  const bool ok = s.replications_ok == rep.config.replications &&
                  s.bound_checked && s.bound_satisfied;
  std::string detail = "mean risk " + fmt(s.mean_risk) + " + 3se " +
                       fmt(3.0 * s.se_risk) + " vs bound " + fmt(s.mean_bound) +
                       ", ok reps " + std::to_string(s.replications_ok) + "/" +
                       std::to_string(rep.config.replications);
  if (!rep.rows.empty() && !rep.rows.front().ok)
    detail += "; first failure: " + rep.rows.front().note;
  return make_check(name, ok, detail);
}

ExperimentConfig base_langevin_config() {
  ExperimentConfig cfg;
  cfg.method = FitMethod::Langevin;
  cfg.eval_points = 10000;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

std::vector<Check> verify_gradients() {
  Rng rng(917);
  std::vector<Check> out;
  out.push_back(check_prior_gradient(rng));
  out.push_back(check_q_gradients(rng));
  out.push_back(check_potential_gradients(rng));
  return out;
}

std::vector<Check> verify_oracles() {
  std::vector<Check> out;
  out.push_back(check_oracle_pair(1));
  out.push_back(check_oracle_pair(2));
  out.push_back(check_oracle_langevin());
  return out;
}

std::vector<Check> verify_bound_regression() {
  ExperimentConfig cfg = base_langevin_config();
  cfg.label = "bound-regression";
  cfg.task = Task::Regression;
  cfg.loss = LossKind::RegSquared;
  cfg.n = 100;
  cfg.dict_size = 50;
  cfg.sparsity = 3;
  cfg.noise_sigma = 0.5;
  cfg.signal_l1 = 1.0;
  cfg.replications = 100;
  cfg.seed = 311;
  cfg.chain_steps = 3000;
  cfg.validate();
  return {bound_check_from_report("bounds/regression", run_experiment(cfg))};
}

std::vector<Check> verify_bound_density() {
  ExperimentConfig cfg = base_langevin_config();
  cfg.label = "bound-density";
  cfg.task = Task::Density;
  cfg.loss = LossKind::DensityL2;
  cfg.n = 200;
  cfg.dict_size = 21;
  cfg.sparsity = 2;
  cfg.coef_magnitude = 0.14;
  cfg.replications = 50;
  cfg.seed = 331;
  cfg.chain_steps = 6000;
  cfg.validate();
  return {bound_check_from_report("bounds/density", run_experiment(cfg))};
}

std::vector<Check> verify_bound_classification() {
  std::vector<Check> out;
  {
    ExperimentConfig cfg = base_langevin_config();
    cfg.label = "bound-logit";
    cfg.task = Task::Classification;
    cfg.loss = LossKind::PhiLogit;
    cfg.n = 200;
    cfg.dict_size = 30;
    cfg.sparsity = 2;
    cfg.coef_magnitude = 0.4;
    cfg.alpha = 10.0;
    cfg.replications = 50;
    cfg.seed = 347;
    cfg.chain_steps = 4000;
    cfg.validate();
    out.push_back(bound_check_from_report("bounds/logit", run_experiment(cfg)));
  }
  {
    ExperimentConfig cfg = base_langevin_config();
    cfg.label = "bound-hinge";
    cfg.task = Task::Classification;
    cfg.loss = LossKind::Hinge;
    cfg.n = 200;
    cfg.dict_size = 30;
    cfg.sparsity = 2;
    cfg.coef_magnitude = 0.2;
    cfg.alpha = 5.0;
    cfg.replications = 50;
    cfg.seed = 349;
    cfg.chain_steps = 4000;
    cfg.validate();
    out.push_back(bound_check_from_report("bounds/hinge", run_experiment(cfg)));
  }
  return out;
}

std::vector<Check> verify_tails() {
  std::vector<Check> out;
  const int draws = 100000;
  Rng rng(601);
  for (int m = 1; m <= 3; ++m) {
    std::vector<double> sums(static_cast<size_t>(draws));
    for (auto& s : sums) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += std::abs(rng.student_t3_scaled());
      s = acc;
    }
    bool ok = true;
    double worst = -1e300;
    int worst_s = 0;
    for (int s = 2 * m + 1; s <= 5 * m; ++s) {
      int count = 0;
      for (const double v : sums)
        if (v >= s) ++count;
      const double p = static_cast<double>(count) / draws;
      const double se = std::sqrt(p * (1.0 - p) / draws);
      const double bound = tail_mass_bound(m, s);
      const double slack = p - (bound + 3.0 * se);
      if (slack > worst) {
        worst = slack;
        worst_s = s;
      }
      ok = ok && slack <= 0.0;
    }
    out.push_back(make_check(
        "tails/m" + std::to_string(m), ok,
        "max (mc - bound - 3se) " + fmt(worst) + " at s = " +
            std::to_string(worst_s) + " (<= 0 passes)"));
  }
  return out;
}

std::vector<Check> verify_scale() {
  Rng rng(701);
  Problem p = gen_sparse_regression(30, 2, 1, 0.5, 1.0, DesignKind::UniformPm1, rng);
  const double s = 3.0;

  const auto fit = [&](const Dictionary& dict, double radius) {
    TuningInputs in;
    in.n = p.train.n();
    in.m = dict.size;
    in.radius = radius;
    in.trace_gram = dict.trace_gram();
    in.sigma2 = 0.25;
    in.l_phi = dict.sup_bound();
    const double beta = choose_beta(LossKind::RegSquared, in);
    in.beta = beta;
    const double tau = choose_tau(in, /*use_trace=*/true);
    PriorConfig prior;
    prior.tau = tau;
    prior.radius = radius;
    prior.dim = dict.size;
    LossModel model;
    model.kind = LossKind::RegSquared;
    return ma_exact(p.train, model, dict, prior, beta, FitMethod::Quadrature);
  };

  const AggregateResult base = fit(p.dict, 2.0);
  Dictionary scaled = p.dict;
  scaled.scale *= s;
  scaled.gram = compute_gram(scaled, p.train.x);
  const AggregateResult shrunk = fit(scaled, 2.0 / s);

  const double err = (shrunk.lambda_hat - base.lambda_hat / s).lpNorm<Eigen::Infinity>();
  return {make_check("scale/quadrature", err <= 1e-8,
                     "max |lambda_scaled - lambda/3| = " + fmt(err) +
                         " (tol 1e-08)")};
}

std::vector<Check> verify_calibration() {
  std::vector<Check> out;
  {
    Rng rng(811);
    const auto grad = [](const Eigen::VectorXd& l, Eigen::VectorXd& out_) {
      out_ = -l;
    };
    const Eigen::MatrixXd states = run_chain(grad, 1e-3, 1000.0, 4, rng);
    const int k = static_cast<int>(states.rows());
    const int lo = k / 2;
    double acc = 0.0;
    long cnt = 0;
    for (int i = lo; i < k; ++i)
      for (int j = 0; j < 4; ++j) {
        acc += states(i, j) * states(i, j);
        ++cnt;
      }
    const double var = acc / static_cast<double>(cnt);
    const bool ok = std::abs(var - 1.0) <= 0.10;
    out.push_back(make_check("calibration/ou-variance", ok,
                             "stationary variance " + fmt(var) +
                                 " (target 1 +- 10%)"));
  }
  {
    Rng rng(813);
    const double h = 1e-3;
    const int k = 200, reps = 1500, dim = 8;
    const auto grad = [](const Eigen::VectorXd&, Eigen::VectorXd& out_) {
      out_.setZero();
    };
    double acc = 0.0;
    long cnt = 0;
    for (int r = 0; r < reps; ++r) {
      const Eigen::MatrixXd states =
          run_chain(grad, h, h * (k + 1.5), dim, rng);
      for (int j = 0; j < dim; ++j) {
        acc += states(k, j) * states(k, j);
        ++cnt;
      }
    }
    const double var = acc / static_cast<double>(cnt);
    const double target = 2.0 * h * k;
    const bool ok = std::abs(var / target - 1.0) <= 0.05;
    out.push_back(make_check("calibration/zero-drift", ok,
                             "variance ratio " + fmt(var / target) +
                                 " (target 1 +- 5%)"));
  }
  return out;
}

std::vector<Check> verify_determinism() {
  ExperimentConfig cfg;
  cfg.label = "determinism";
  cfg.task = Task::Regression;
  cfg.method = FitMethod::Rejection;
  cfg.n = 30;
  cfg.dict_size = 5;
  cfg.sparsity = 2;
  cfg.samples = 20000;
  cfg.eval_points = 2000;
  cfg.replications = 3;
  cfg.seed = 99;
  cfg.validate();

  const Report a = run_experiment(cfg);
  const Report b = run_experiment(cfg);
  ExperimentConfig threaded = cfg;
  threaded.threads = 2;
  const Report c = run_experiment(threaded);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path pa = dir / "masp_det_a.csv";
  const fs::path pb = dir / "masp_det_b.csv";
  write_rows_csv(a, pa.string());
  write_rows_csv(b, pb.string());
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string file_a = slurp(pa);
  const std::string file_b = slurp(pb);
  fs::remove(pa);
  fs::remove(pb);

  std::vector<Check> out;
  out.push_back(make_check("determinism/rerun",
                           !file_a.empty() && file_a == file_b,
                           "csv bytes " + std::to_string(file_a.size()) +
                               " vs " + std::to_string(file_b.size())));
  out.push_back(make_check("determinism/threads",
                           rows_to_csv(a) == rows_to_csv(c),
                           "2-thread rows match the serial rows"));
  return out;
}

std::vector<Check> verify_rate() {
  ExperimentConfig cfg = base_langevin_config();
  cfg.label = "rate";
  cfg.task = Task::Regression;
  cfg.loss = LossKind::RegSquared;
  cfg.dict_size = 50;
  cfg.sparsity = 3;
  cfg.noise_sigma = 0.5;
  cfg.signal_l1 = 3.0;
  cfg.beta = 2.0;
  cfg.radius = 6.0;
  cfg.tau = 0.03;
  cfg.chain_steps = 6000;
  cfg.replications = 32;
  cfg.seed = 2026;

  const int ns[] = {25, 50, 100, 200};
  std::vector<double> means, ses;
  for (const int n : ns) {
    cfg.n = n;  // same master seed: smaller samples are prefixes of larger ones
    cfg.validate();
    const Report rep = run_experiment(cfg);
    if (rep.summary.replications_ok != cfg.replications)
      return {make_check("rate/regression", false,
                         "failed replications at n = " + std::to_string(n) +
                             ": " + rep.rows.front().note)};
    means.push_back(rep.summary.mean_risk);
    ses.push_back(rep.summary.se_risk);
  }
  bool ok = true;
  std::string path;
  for (size_t i = 0; i < means.size(); ++i) {
    if (i > 0) {
      const double allowed = std::sqrt(ses[i] * ses[i] + ses[i - 1] * ses[i - 1]);
      ok = ok && means[i] <= means[i - 1] + allowed;
      path += " -> ";
    }
    path += fmt(means[i]);
  }
  return {make_check("rate/regression", ok,
                     "mean risk over n {25,50,100,200}: " + path)};
}

std::vector<Check> verify_suite(const std::string& suite) {
  const auto concat = [](std::vector<Check> a, std::vector<Check> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  if (suite == "gradients") return verify_gradients();
  if (suite == "oracles") return verify_oracles();
  if (suite == "bounds")
    return concat(concat(verify_bound_regression(), verify_bound_density()),
                  verify_bound_classification());
  if (suite == "tails") return verify_tails();
  if (suite == "scale") return verify_scale();
  if (suite == "calibration") return verify_calibration();
  if (suite == "determinism") return verify_determinism();
  if (suite == "rate") return verify_rate();
  if (suite == "all") {
    std::vector<Check> out;
    for (const char* s : {"gradients", "oracles", "bounds", "tails", "scale",
                          "calibration", "determinism", "rate"})
      out = concat(std::move(out), verify_suite(s));
    return out;
  }
  throw ConfigError("unknown verify suite: " + suite);
}

}  // namespace masp
