#include "masp/models.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace masp {

Task task_of(LossKind kind) {
  switch (kind) {
    case LossKind::RegSquared: return Task::Regression;
    case LossKind::DensityL2: return Task::Density;
    default: return Task::Classification;
  }
}

bool is_phi_loss(LossKind kind) {
  switch (kind) {
    case LossKind::PhiSquared:
    case LossKind::PhiTruncated:
    case LossKind::PhiBoosting:
    case LossKind::PhiLogit:
      return true;
    default:
      return false;
  }
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "reg-squared") return LossKind::RegSquared;
  if (s == "density-l2") return LossKind::DensityL2;
  if (s == "phi-squared") return LossKind::PhiSquared;
  if (s == "phi-truncated") return LossKind::PhiTruncated;
  if (s == "phi-boosting") return LossKind::PhiBoosting;
  if (s == "phi-logit") return LossKind::PhiLogit;
  if (s == "hinge") return LossKind::Hinge;
  throw std::invalid_argument("unknown loss kind: " + s);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::RegSquared: return "reg-squared";
    case LossKind::DensityL2: return "density-l2";
    case LossKind::PhiSquared: return "phi-squared";
    case LossKind::PhiTruncated: return "phi-truncated";
    case LossKind::PhiBoosting: return "phi-boosting";
    case LossKind::PhiLogit: return "phi-logit";
    case LossKind::Hinge: return "hinge";
  }
  return "?";
}

void Dataset::validate(Task task) const {
  // zero rows is legal: aggregation with no data falls back to the prior mean
  if (task == Task::Density) {
    if (y.size() != 0 && y.size() != x.rows())
      throw std::invalid_argument("dataset: stray responses for density task");
    return;
  }
  if (y.size() != x.rows())
    throw std::invalid_argument("dataset: response count != observation count");
  if (task == Task::Classification) {
    for (int i = 0; i < y.size(); ++i)
      if (y[i] != 1.0 && y[i] != -1.0)
        throw std::invalid_argument("dataset: labels must be +-1");
  }
}

Dataset load_dataset_csv(const std::string& path, bool has_response) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error("dataset: non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("dataset: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("dataset: no rows in " + path);
  const int n = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  const int d = has_response ? w - 1 : w;
  if (d < 1) throw std::runtime_error("dataset: no covariate columns");
  Dataset data;
  data.x.resize(n, d);
  if (has_response) data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.x(i, j) = rows[i][j];
    if (has_response) data.y[i] = rows[i][d];
  }
  return data;
}

static void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void save_dataset_csv(const std::string& path, const Dataset& data,
                      bool has_response) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  std::string line;
  for (int i = 0; i < data.n(); ++i) {
    line.clear();
    for (int j = 0; j < data.x.cols(); ++j) {
      if (j) line += ',';
      append_g17(line, data.x(i, j));
    }
    if (has_response) {
      line += ',';
      append_g17(line, data.y[i]);
    }
    out << line << '\n';
  }
}

void Dictionary::validate() const {
  if (size < 1) throw std::invalid_argument("dictionary: size must be >= 1");
  if (scale.size() != size || raw_sup.size() != size)
    throw std::invalid_argument("dictionary: scale/sup size mismatch");
  if (gram && (gram->rows() != size || gram->cols() != size))
    throw std::invalid_argument("dictionary: gram size mismatch");
}

void Dictionary::eval_raw(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  out.resize(size);
  switch (family) {
    case Family::Coordinate:
      if (x.size() != size)
        throw std::invalid_argument("dictionary: covariate dimension != M");
      out = x;
      return;
    case Family::Trig: {
      // 1, sqrt2 cos(2 pi k x), sqrt2 sin(2 pi k x), k = 1, 2, ...
      const double t = 6.283185307179586476925286766559 * x[0];
      out[0] = 1.0;
      for (int j = 1; j < size; ++j) {
        const int k = (j + 1) / 2;
        const double a = k * t;
        out[j] = (j % 2 == 1) ? std::sqrt(2.0) * std::cos(a)
                              : std::sqrt(2.0) * std::sin(a);
      }
      return;
    }
    case Family::Stumps:
      if (x.size() != size)
        throw std::invalid_argument("dictionary: covariate dimension != M");
      for (int j = 0; j < size; ++j) out[j] = x[j] >= 0.0 ? 1.0 : -1.0;
      return;
  }
  throw std::logic_error("dictionary: unknown family");
}

Eigen::VectorXd Dictionary::row(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out;
  eval_raw(x, out);
  out.array() *= scale.array();
  return out;
}

Eigen::MatrixXd Dictionary::rows(const Eigen::MatrixXd& xs) const {
  Eigen::MatrixXd out(xs.rows(), size);
  Eigen::VectorXd tmp(size);
  for (int i = 0; i < xs.rows(); ++i) {
    eval_raw(xs.row(i).transpose(), tmp);
    out.row(i) = (tmp.array() * scale.array()).transpose();
  }
  return out;
}

double Dictionary::predict(const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& x) const {
  if (lambda.size() != size)
    throw std::invalid_argument("dictionary: lambda dimension != M");
  return row(x).dot(lambda);
}

double Dictionary::sup_bound() const {
  return (raw_sup.array() * scale.array().abs()).maxCoeff();
}

double Dictionary::trace_gram() const {
  if (!gram) throw std::logic_error("dictionary: gram not set");
  return gram->trace();
}

static Dictionary base_dictionary(Dictionary::Family family, int m) {
  if (m < 1) throw std::invalid_argument("dictionary: M must be >= 1");
  Dictionary d;
  d.family = family;
  d.size = m;
  d.scale = Eigen::VectorXd::Ones(m);
  d.raw_sup = Eigen::VectorXd::Ones(m);
  return d;
}

Dictionary make_coordinate_dictionary(int m) {
  return base_dictionary(Dictionary::Family::Coordinate, m);
}

Dictionary make_trig_dictionary(int m) {
  Dictionary d = base_dictionary(Dictionary::Family::Trig, m);
  for (int j = 1; j < m; ++j) d.raw_sup[j] = std::sqrt(2.0);
  return d;
}

Dictionary make_stump_dictionary(int m) {
  Dictionary d = base_dictionary(Dictionary::Family::Stumps, m);
  d.binary_raw = true;
  return d;
}

Eigen::MatrixXd compute_gram(const Dictionary& dict, const Eigen::MatrixXd& xs) {
  const Eigen::MatrixXd phi = dict.rows(xs);
  return phi.transpose() * phi / static_cast<double>(xs.rows());
}

Eigen::MatrixXd compute_gram(const Dictionary& dict, const Eigen::MatrixXd& xs,
                             const Eigen::VectorXd& weights) {
  if (weights.size() != xs.rows())
    throw std::invalid_argument("gram: weight count != grid size");
  const Eigen::MatrixXd phi = dict.rows(xs);
  return phi.transpose() * weights.asDiagonal() * phi;
}

static Dictionary normalize_with_gram(const Dictionary& dict,
                                      const Eigen::MatrixXd& gram_now) {
  Dictionary out = dict;
  for (int j = 0; j < dict.size; ++j) {
    const double norm = std::sqrt(gram_now(j, j));
    if (!(norm > 0.0))
      throw std::invalid_argument("normalize: zero-norm dictionary function");
    out.scale[j] = dict.scale[j] / norm;
  }
  // Gram of the rescaled functions follows from the old one by conjugation
  // with the diagonal of 1/norms, which keeps it consistent with whatever
  // reference produced gram_now.
  Eigen::VectorXd inv(dict.size);
  for (int j = 0; j < dict.size; ++j) inv[j] = 1.0 / std::sqrt(gram_now(j, j));
  out.gram = inv.asDiagonal() * gram_now * inv.asDiagonal();
  return out;
}

Dictionary normalize_dictionary(const Dictionary& dict,
                                const Eigen::MatrixXd& reference_x) {
  dict.validate();
  return normalize_with_gram(dict, compute_gram(dict, reference_x));
}

Dictionary normalize_dictionary(const Dictionary& dict,
                                const Eigen::MatrixXd& grid_x,
                                const Eigen::VectorXd& weights) {
  dict.validate();
  return normalize_with_gram(dict, compute_gram(dict, grid_x, weights));
}

// ---- margin losses ----------------------------------------------------

namespace {

double phi_sq_val(double u) { const double a = 1.0 + u; return a * a; }
double phi_sq_der(double u) { return 2.0 * (1.0 + u); }

double phi_tr_val(double u) {
  const double a = std::max(1.0 + u, 0.0);
  return a * a;
}
double phi_tr_der(double u) { return 2.0 * std::max(1.0 + u, 0.0); }

double phi_bo_val(double u) { return std::exp(u); }
double phi_bo_der(double u) { return std::exp(u); }

double phi_lo_val(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}
double phi_lo_der(double u) {
  return u > 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

}  // namespace

PhiSpec phi_registry(LossKind kind, double r, double l_phi) {
  if (!(r > 0.0) || !(l_phi > 0.0))
    throw std::invalid_argument("phi_registry: r and l_phi must be > 0");
  const double rl = r * l_phi;
  switch (kind) {
    case LossKind::PhiSquared:
      return {kind, 2.0 * (1.0 + rl) * (1.0 + rl), 8.0, phi_sq_val, phi_sq_der};
    case LossKind::PhiTruncated:
      return {kind, 2.0 * (1.0 + rl) * (1.0 + rl), 8.0, phi_tr_val, phi_tr_der};
    case LossKind::PhiBoosting:
      return {kind, std::exp(rl), 4.0 * std::exp(rl), phi_bo_val, phi_bo_der};
    case LossKind::PhiLogit:
      return {kind, std::exp(rl), 4.0, phi_lo_val, phi_lo_der};
    case LossKind::Hinge:
      throw std::invalid_argument(
          "phi_registry: hinge has no smooth-margin constants; use the "
          "dedicated hinge temperature rule");
    default:
      throw std::invalid_argument("phi_registry: not a margin loss");
  }
}

double k_eps(double z, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("k_eps: eps must be > 0");
  if (z <= 0.0) return 0.0;
  return std::sqrt(eps * eps + z * z) - eps;
}

double k_eps_prime(double z, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("k_eps: eps must be > 0");
  if (z <= 0.0) return 0.0;
  return z / std::sqrt(eps * eps + z * z);
}

// ---- observation-level losses ------------------------------------------

static double phi_value_of(LossKind kind, double u) {
  switch (kind) {
    case LossKind::PhiSquared: return phi_sq_val(u);
    case LossKind::PhiTruncated: return phi_tr_val(u);
    case LossKind::PhiBoosting: return phi_bo_val(u);
    case LossKind::PhiLogit: return phi_lo_val(u);
    default: throw std::logic_error("phi_value_of: not a margin loss");
  }
}

static double phi_deriv_of(LossKind kind, double u) {
  switch (kind) {
    case LossKind::PhiSquared: return phi_sq_der(u);
    case LossKind::PhiTruncated: return phi_tr_der(u);
    case LossKind::PhiBoosting: return phi_bo_der(u);
    case LossKind::PhiLogit: return phi_lo_der(u);
    default: throw std::logic_error("phi_deriv_of: not a margin loss");
  }
}

double q_value_row(const LossModel& model, const Eigen::VectorXd& phi, double y,
                   const Eigen::VectorXd& lambda, const Eigen::MatrixXd* gram) {
  switch (model.kind) {
    case LossKind::RegSquared: {
      const double r = y - phi.dot(lambda);
      return r * r;
    }
    case LossKind::DensityL2: {
      if (!gram) throw std::logic_error("q_value: density loss needs a Gram");
      return lambda.dot(*gram * lambda) - 2.0 * phi.dot(lambda);
    }
    case LossKind::Hinge:
      return std::max(1.0 - y * phi.dot(lambda), 0.0);
    default:
      return phi_value_of(model.kind, -y * phi.dot(lambda));
  }
}

double q_value_smoothed_row(const LossModel& model, const Eigen::VectorXd& phi,
                            double y, const Eigen::VectorXd& lambda,
                            const Eigen::MatrixXd* gram) {
  if (model.kind == LossKind::Hinge)
    return k_eps(1.0 - y * phi.dot(lambda), model.hinge_eps);
  return q_value_row(model, phi, y, lambda, gram);
}

void add_q_grad_row(const LossModel& model, const Eigen::VectorXd& phi,
                    double y, const Eigen::VectorXd& lambda,
                    const Eigen::MatrixXd* gram, Eigen::VectorXd& out) {
  switch (model.kind) {
    case LossKind::RegSquared:
      out.noalias() += (-2.0 * (y - phi.dot(lambda))) * phi;
      return;
    case LossKind::DensityL2:
      if (!gram) throw std::logic_error("q_grad: density loss needs a Gram");
      out.noalias() += 2.0 * (*gram * lambda);
      out.noalias() -= 2.0 * phi;
      return;
    case LossKind::Hinge: {
      const double d = k_eps_prime(1.0 - y * phi.dot(lambda), model.hinge_eps);
      if (d != 0.0) out.noalias() += (-y * d) * phi;
      return;
    }
    default:
      out.noalias() += (-y * phi_deriv_of(model.kind, -y * phi.dot(lambda))) * phi;
      return;
  }
}

double q_value(const LossModel& model, const Dictionary& dict,
               const Eigen::VectorXd& x, double y,
               const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd phi = dict.row(x);
  const Eigen::MatrixXd* gram = dict.gram ? &*dict.gram : nullptr;
  return q_value_row(model, phi, y, lambda, gram);
}

Eigen::VectorXd q_grad(const LossModel& model, const Dictionary& dict,
                       const Eigen::VectorXd& x, double y,
                       const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd phi = dict.row(x);
  const Eigen::MatrixXd* gram = dict.gram ? &*dict.gram : nullptr;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lambda.size());
  add_q_grad_row(model, phi, y, lambda, gram, out);
  return out;
}

// ---- risks ---------------------------------------------------------------

double regression_risk(const Dictionary& dict, const Eigen::VectorXd& lambda_hat,
                       const Eigen::VectorXd& lambda_star,
                       const Eigen::MatrixXd& eval_x) {
  if (eval_x.rows() == 0)
    throw std::invalid_argument("regression_risk: empty evaluation sample");
  const Eigen::VectorXd delta = lambda_hat - lambda_star;
  double acc = 0.0;
  Eigen::VectorXd tmp(dict.size);
  for (int i = 0; i < eval_x.rows(); ++i) {
    dict.eval_raw(eval_x.row(i).transpose(), tmp);
    const double d = (tmp.array() * dict.scale.array()).matrix().dot(delta);
    acc += d * d;
  }
  return acc / static_cast<double>(eval_x.rows());
}

double density_ise(const Eigen::MatrixXd& grid_gram,
                   const Eigen::VectorXd& lambda_hat,
                   const Eigen::VectorXd& lambda_star) {
  const Eigen::VectorXd delta = lambda_hat - lambda_star;
  return delta.dot(grid_gram * delta);
}

// pointwise Phi-risk of predicting the fixed score g when P(Y=1|x) = p
static double pointwise_phi_risk(LossKind kind, double p, double g) {
  if (kind == LossKind::Hinge)
    return p * std::max(1.0 - g, 0.0) + (1.0 - p) * std::max(1.0 + g, 0.0);
  return p * phi_value_of(kind, -g) + (1.0 - p) * phi_value_of(kind, g);
}

// infimum over g of the above, in closed form per loss
static double pointwise_bayes_risk(LossKind kind, double eta) {
  const double p = 0.5 * (1.0 + eta);
  switch (kind) {
    case LossKind::PhiSquared:
    case LossKind::PhiTruncated:
      return 1.0 - eta * eta;
    case LossKind::PhiBoosting:
      return std::sqrt(std::max(1.0 - eta * eta, 0.0));
    case LossKind::PhiLogit: {
      double h = 0.0;
      if (p > 0.0 && p < 1.0)
        h = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
      return h;
    }
    case LossKind::Hinge:
      return 1.0 - std::abs(eta);
    default:
      throw std::invalid_argument("bayes risk: not a classification loss");
  }
}

ClassificationRisk classification_risk(
    const LossModel& model, const Dictionary& dict,
    const Eigen::VectorXd& lambda_hat,
    const std::function<double(const Eigen::VectorXd&)>& eta,
    const Eigen::MatrixXd& eval_x) {
  if (task_of(model.kind) != Task::Classification)
    throw std::invalid_argument("classification_risk: wrong loss kind");
  if (eval_x.rows() == 0)
    throw std::invalid_argument("classification_risk: empty evaluation sample");
  double phi_acc = 0.0;
  double mis_acc = 0.0;
  Eigen::VectorXd tmp(dict.size);
  for (int i = 0; i < eval_x.rows(); ++i) {
    const Eigen::VectorXd x = eval_x.row(i).transpose();
    const double e = eta(x);
    if (!(e >= -1.0 && e <= 1.0))
      throw std::invalid_argument("classification_risk: eta outside [-1, 1]");
    dict.eval_raw(x, tmp);
    const double g = (tmp.array() * dict.scale.array()).matrix().dot(lambda_hat);
    const double p = 0.5 * (1.0 + e);
    phi_acc += pointwise_phi_risk(model.kind, p, g) -
               pointwise_bayes_risk(model.kind, e);
    // excess zero-one risk relative to sign(eta); a zero score is an
    // undecided prediction and counts as half an error
    if (e != 0.0) {
      if (g == 0.0)
        mis_acc += 0.5 * std::abs(e);
      else if ((g > 0.0) != (e > 0.0))
        mis_acc += std::abs(e);
    }
  }
  const double n = static_cast<double>(eval_x.rows());
  return {phi_acc / n, mis_acc / n};
}

}  // namespace masp
