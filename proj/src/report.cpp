#include "masp/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace masp {
namespace {

using ordered_json = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string sanitize(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return t;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["label"] = c.label;
  j["task"] = c.task == Task::Regression      ? "regression"
              : c.task == Task::Density       ? "density"
                                              : "classification";
  j["loss"] = to_string(c.loss);
  j["method"] = to_string(c.method);
  j["ewa_only"] = c.ewa_only;
  j["n"] = c.n;
  j["dict_size"] = c.dict_size;
  j["sparsity"] = c.sparsity;
  j["noise_sigma"] = c.noise_sigma;
  j["signal_l1"] = c.signal_l1;
  j["coef_magnitude"] = c.coef_magnitude;
  j["design"] = to_string(c.design);
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["eval_points"] = c.eval_points;
  j["threads"] = c.threads;
  j["radius"] = c.radius;
  j["beta"] = c.beta;
  j["tau"] = c.tau;
  j["alpha"] = c.alpha;
  j["sparsity_hat"] = c.sparsity_hat;
  j["tau_trace"] = c.tau_trace;
  j["density_beta_shortcut"] = c.density_beta_shortcut;
  j["hinge_eps"] = c.hinge_eps;
  j["samples"] = c.samples;
  j["grid_points"] = c.grid_points;
  j["step"] = c.step;
  j["chain_steps"] = c.chain_steps;
  j["burn_in"] = c.burn_in;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string rows_to_csv(const Report& report) {
  std::string out =
      "rep,seed,ok,beta,tau,radius,risk,oracle_risk,bound,misclass,"
      "lambda_l1,occupancy,ess_min,note\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.rep);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.ok ? 1 : 0);
    out += ',' + format_double(r.beta);
    out += ',' + format_double(r.tau);
    out += ',' + format_double(r.radius);
    out += ',' + format_double(r.risk);
    out += ',' + format_double(r.oracle_risk);
    out += ',' + format_double(r.bound);
    out += ',' + format_double(r.misclass);
    out += ',' + format_double(r.lambda_l1);
    out += ',' + format_double(r.occupancy);
    out += ',' + format_double(r.ess_min);
    out += ',' + sanitize(r.note);
    out += '\n';
  }
  return out;
}

void write_rows_csv(const Report& report, const std::string& path) {
  write_text(path, rows_to_csv(report));
}

std::string summary_to_json(const Report& report) {
  const Summary& s = report.summary;
  ordered_json j;
  j["config"] = config_json(report.config);
  ordered_json sj;
  sj["replications_ok"] = s.replications_ok;
  sj["mean_risk"] = s.mean_risk;
  sj["se_risk"] = s.se_risk;
  sj["mean_misclass"] = s.mean_misclass;
  sj["mean_bound"] = s.mean_bound;
  sj["bound_checked"] = s.bound_checked;
  sj["bound_satisfied"] = s.bound_satisfied;
  sj["wall_seconds"] = s.wall_seconds;
  j["summary"] = sj;
  return j.dump(2) + "\n";
}

void write_summary_json(const Report& report, const std::string& path) {
  write_text(path, summary_to_json(report));
}

std::string fit_to_json(const ExperimentConfig& cfg, const ResolvedTuning& t,
                        const AggregateResult& result) {
  ordered_json j;
  j["config"] = config_json(cfg);
  ordered_json tj;
  tj["beta"] = t.beta;
  tj["tau"] = t.tau;
  tj["radius"] = t.radius;
  tj["alpha"] = t.alpha;
  j["tuning"] = tj;
  j["method"] = to_string(result.method);
  j["lambda_hat"] = std::vector<double>(
      result.lambda_hat.data(), result.lambda_hat.data() + result.lambda_hat.size());
  j["lambda_l1"] = result.lambda_hat.lpNorm<1>();
  ordered_json dj;
  dj["ball_occupancy"] = result.diag.ball_occupancy;
  if (!result.diag.stage_ess.empty()) dj["stage_ess"] = result.diag.stage_ess;
  if (!result.diag.stage_occupancy.empty())
    dj["stage_occupancy"] = result.diag.stage_occupancy;
  if (result.diag.standard_error) {
    const auto& se = *result.diag.standard_error;
    dj["standard_error"] = std::vector<double>(se.data(), se.data() + se.size());
  }
  dj["wall_seconds"] = result.diag.wall_seconds;
  j["diagnostics"] = dj;
  return j.dump(2) + "\n";
}

}  // namespace masp
