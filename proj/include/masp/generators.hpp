#pragma once

#include <Eigen/Dense>
#include <optional>

#include "masp/models.hpp"
#include "masp/rng.hpp"

namespace masp {

enum class DesignKind { Rademacher, UniformPm1 };
DesignKind design_from_string(const std::string& s);
std::string to_string(DesignKind d);

struct DensityGrid {
  Eigen::MatrixXd points;   // column of grid abscissas on [0, 1]
  Eigen::VectorXd weights;  // trapezoid masses, sum 1
};

// A synthetic problem: training data, the dictionary it was built from and
// the generating coefficients.  All generators draw per-observation values
// row by row after fixing the support, so two runs from the same seed with
// different n share a common data prefix (used by the risk-vs-n sweeps).
struct Problem {
  Task task = Task::Regression;
  Dataset train;
  Dictionary dict;
  Eigen::VectorXd lambda_star;
  DesignKind design = DesignKind::Rademacher;
  std::optional<DensityGrid> grid;  // density only

  // conditional label mean at x (classification truth)
  double eta(const Eigen::VectorXd& x) const;
  // covariates from the same design law, for held-out risk estimates
  Eigen::MatrixXd fresh_covariates(int count, Rng& rng) const;
};

// Y_i = X_i . lambda_star + sigma Z_i; support of size m_star drawn without
// replacement, signs random, magnitudes signal_l1 / m_star each; coordinate
// dictionary with its empirical Gram attached.
Problem gen_sparse_regression(int n, int m, int m_star, double sigma,
                              double signal_l1, DesignKind design, Rng& rng);

// f = 1 + sparse combination of the non-constant trig functions with
// magnitudes coef_mag (signs redrawn until f >= 0, which at the defaults is
// immediate); observations by inverse-CDF sampling on the quadrature grid.
Problem gen_density(int n, int m, int m_star, double coef_mag, Rng& rng,
                    int grid_points = 2001);

// eta(x) = clip(sum_j lambda*_j sign(x_j), -1, 1) on uniform [-1,1]^M
// covariates, stump dictionary; labels are +-1 coin flips with mean eta.
Problem gen_classification(int n, int m, int m_star, double coef_mag, Rng& rng);

}  // namespace masp
