#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

namespace masp {

enum class Task { Regression, Density, Classification };

// Loss kinds Q(z, g) entering the exponential weights:
//   RegSquared     (y - g(x))^2
//   DensityL2      ||g||^2_mu - 2 g(x)        (x ~ unknown density, mu known)
//   PhiSquared     Phi(u) = (1 + u)^2         at u = -y g(x)
//   PhiTruncated   Phi(u) = max(1 + u, 0)^2
//   PhiBoosting    Phi(u) = exp(u)
//   PhiLogit       Phi(u) = log(1 + e^u)
//   Hinge          max(1 - y g(x), 0)
enum class LossKind {
  RegSquared,
  DensityL2,
  PhiSquared,
  PhiTruncated,
  PhiBoosting,
  PhiLogit,
  Hinge
};

Task task_of(LossKind kind);
bool is_phi_loss(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);
std::string to_string(LossKind kind);

struct LossModel {
  LossKind kind = LossKind::RegSquared;
  // scale of the K_eps ramp used to smooth the hinge for gradient-based
  // sampling; reported risks and aggregation weights keep the exact hinge
  double hinge_eps = 1e-3;
};

// n observations; y holds responses (regression) or +-1 labels
// (classification) and stays empty for density estimation.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  int n() const { return static_cast<int>(x.rows()); }
  void validate(Task task) const;
};

// covariates then response/label, one row per observation, no header
Dataset load_dataset_csv(const std::string& path, bool has_response);
void save_dataset_csv(const std::string& path, const Dataset& data,
                      bool has_response);

// A finite dictionary phi_1..phi_M.  `scale` carries both empirical
// normalization and deliberate rescalings (the scale-equivariance checks),
// so phi_j here always means scale[j] * raw family member j.
struct Dictionary {
  enum class Family { Coordinate, Trig, Stumps };

  Family family = Family::Coordinate;
  int size = 0;
  Eigen::VectorXd scale;    // multiplier per function
  Eigen::VectorXd raw_sup;  // sup norm per raw family member on the design domain
  std::optional<Eigen::MatrixXd> gram;  // Gram of the scaled dictionary
  bool binary_raw = false;  // raw values in {-1, +1} (stumps)

  void eval_raw(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  Eigen::VectorXd row(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd rows(const Eigen::MatrixXd& xs) const;
  double predict(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x) const;
  double sup_bound() const;    // L_phi for the scaled dictionary
  double trace_gram() const;   // throws if gram is absent
  void validate() const;
};

// coordinate projections phi_j(x) = x_j on designs in [-1, 1]^M
Dictionary make_coordinate_dictionary(int m);
// 1, sqrt(2) cos(2 pi k x), sqrt(2) sin(2 pi k x), ... on [0, 1]
Dictionary make_trig_dictionary(int m);
// decision stumps phi_j(x) = sign(x_j), sign(0) := +1
Dictionary make_stump_dictionary(int m);

// Gram matrix of the scaled dictionary, either over an empirical sample
// (rows of xs) or over a weighted grid (quadrature for a known measure mu).
Eigen::MatrixXd compute_gram(const Dictionary& dict, const Eigen::MatrixXd& xs);
Eigen::MatrixXd compute_gram(const Dictionary& dict, const Eigen::MatrixXd& xs,
                             const Eigen::VectorXd& weights);

// Rescale every phi_j to unit empirical L2 norm over the reference; the
// returned dictionary has its Gram recomputed on the same reference (unit
// diagonal, trace = M).  Idempotent.  Throws on a zero-norm function.
Dictionary normalize_dictionary(const Dictionary& dict,
                                const Eigen::MatrixXd& reference_x);
Dictionary normalize_dictionary(const Dictionary& dict,
                                const Eigen::MatrixXd& grid_x,
                                const Eigen::VectorXd& weights);

// margin losses: value/derivative of Phi plus the temperature beta_phi and
// remainder constant c_phi valid for aggregates confined to ||lambda||_1 <= r
struct PhiSpec {
  LossKind kind;
  double beta_phi;
  double c_phi;
  double (*value)(double u);
  double (*deriv)(double u);
};

// throws std::invalid_argument for Hinge (no valid convex surrogate constants)
// and for non-classification kinds
PhiSpec phi_registry(LossKind kind, double r, double l_phi);

// 1-Lipschitz C^2 ramp: 0 for z <= 0, sqrt(eps^2 + z^2) - eps beyond; squeezed
// between max(z,0) - eps and max(z,0), second derivative in (0, 1/eps]
double k_eps(double z, double eps);
double k_eps_prime(double z, double eps);

// observation-level loss value Q(z, f_lambda); y is ignored for DensityL2
double q_value(const LossModel& model, const Dictionary& dict,
               const Eigen::VectorXd& x, double y,
               const Eigen::VectorXd& lambda);

// gradient in lambda; Hinge uses the K_eps-smoothed ramp derivative
Eigen::VectorXd q_grad(const LossModel& model, const Dictionary& dict,
                       const Eigen::VectorXd& x, double y,
                       const Eigen::VectorXd& lambda);

// row-level kernels used by the aggregation and sampling hot paths; `phi` is
// the precomputed dictionary row, `gram` is required for DensityL2 only
double q_value_row(const LossModel& model, const Eigen::VectorXd& phi, double y,
                   const Eigen::VectorXd& lambda, const Eigen::MatrixXd* gram);
// identical to q_value_row except Hinge, which becomes K_eps(1 - y g)
double q_value_smoothed_row(const LossModel& model, const Eigen::VectorXd& phi,
                            double y, const Eigen::VectorXd& lambda,
                            const Eigen::MatrixXd* gram);
void add_q_grad_row(const LossModel& model, const Eigen::VectorXd& phi,
                    double y, const Eigen::VectorXd& lambda,
                    const Eigen::MatrixXd* gram, Eigen::VectorXd& out);

// mean over eval rows of (f_lhat(x) - f_lstar(x))^2
double regression_risk(const Dictionary& dict, const Eigen::VectorXd& lambda_hat,
                       const Eigen::VectorXd& lambda_star,
                       const Eigen::MatrixXd& eval_x);

// integrated squared error (lhat - lstar)' G (lhat - lstar) on the grid Gram
double density_ise(const Eigen::MatrixXd& grid_gram,
                   const Eigen::VectorXd& lambda_hat,
                   const Eigen::VectorXd& lambda_star);

struct ClassificationRisk {
  double excess_phi;       // E Phi-risk(f_lhat) - E Phi-risk(Bayes-Phi)
  double excess_misclass;  // E 1{sign disagrees} |eta|, ties count half
};

// eta(x) = E[Y | X = x] for the +-1 label; excess risks averaged over eval rows
ClassificationRisk classification_risk(
    const LossModel& model, const Dictionary& dict,
    const Eigen::VectorXd& lambda_hat,
    const std::function<double(const Eigen::VectorXd&)>& eta,
    const Eigen::MatrixXd& eval_x);

}  // namespace masp
