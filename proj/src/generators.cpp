#include "masp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace masp {
namespace {

// m_star distinct indices in [lo, dim), partial Fisher-Yates
std::vector<int> draw_support(int lo, int dim, int m_star, Rng& rng) {
  const int pool = dim - lo;
  if (m_star < 0 || m_star > pool)
    throw std::invalid_argument("draw_support: sparsity exceeds dictionary size");
  std::vector<int> idx(static_cast<size_t>(pool));
  std::iota(idx.begin(), idx.end(), lo);
  for (int k = 0; k < m_star; ++k) {
    const int j = k + rng.uniform_int(pool - k);
    std::swap(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(j)]);
  }
  idx.resize(static_cast<size_t>(m_star));
  return idx;
}

double rademacher(Rng& rng) { return rng.uniform() <= 0.5 ? -1.0 : 1.0; }
double uniform_pm1(Rng& rng) { return 2.0 * rng.uniform() - 1.0; }

}  // namespace

DesignKind design_from_string(const std::string& s) {
  if (s == "rademacher") return DesignKind::Rademacher;
  if (s == "uniform") return DesignKind::UniformPm1;
  throw std::invalid_argument("unknown design: " + s);
}

std::string to_string(DesignKind d) {
  return d == DesignKind::Rademacher ? "rademacher" : "uniform";
}

double Problem::eta(const Eigen::VectorXd& x) const {
  if (task != Task::Classification)
    throw std::logic_error("eta: only defined for classification problems");
  double f = 0.0;
  for (int j = 0; j < lambda_star.size(); ++j)
    f += lambda_star[j] * (x[j] >= 0.0 ? 1.0 : -1.0);
  return std::clamp(f, -1.0, 1.0);
}

Eigen::MatrixXd Problem::fresh_covariates(int count, Rng& rng) const {
  if (task == Task::Density)
    throw std::logic_error("fresh_covariates: density risk uses the grid");
  const int m = static_cast<int>(train.x.cols());
  Eigen::MatrixXd x(count, m);
  const bool rad = (task == Task::Regression && design == DesignKind::Rademacher);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = rad ? rademacher(rng) : uniform_pm1(rng);
  return x;
}

Problem gen_sparse_regression(int n, int m, int m_star, double sigma,
                              double signal_l1, DesignKind design, Rng& rng) {
  if (n < 0 || m < 1) throw std::invalid_argument("gen_sparse_regression: bad sizes");
  Problem p;
  p.task = Task::Regression;
  p.design = design;
  p.lambda_star = Eigen::VectorXd::Zero(m);
  const auto support = draw_support(0, m, m_star, rng);
  const double mag = m_star > 0 ? signal_l1 / m_star : 0.0;
  for (int j : support) p.lambda_star[j] = rademacher(rng) * mag;

  p.train.x.resize(n, m);
  p.train.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j)
      p.train.x(i, j) = design == DesignKind::Rademacher ? rademacher(rng) : uniform_pm1(rng);
    p.train.y[i] = p.train.x.row(i).dot(p.lambda_star) + sigma * rng.normal();
  }
  p.dict = make_coordinate_dictionary(m);
  p.dict.gram = n > 0 ? compute_gram(p.dict, p.train.x)
                      : Eigen::MatrixXd::Identity(m, m).eval();
  return p;
}

Problem gen_density(int n, int m, int m_star, double coef_mag, Rng& rng,
                    int grid_points) {
  if (n < 0 || m < 1 || grid_points < 2)
    throw std::invalid_argument("gen_density: bad sizes");
  Problem p;
  p.task = Task::Density;
  p.dict = make_trig_dictionary(m);

  DensityGrid grid;
  grid.points.resize(grid_points, 1);
  grid.weights.resize(grid_points);
  const double dx = 1.0 / (grid_points - 1);
  for (int k = 0; k < grid_points; ++k) {
    grid.points(k, 0) = k * dx;
    grid.weights[k] = (k == 0 || k == grid_points - 1) ? 0.5 * dx : dx;
  }
  p.dict.gram = compute_gram(p.dict, grid.points, grid.weights);

  // constant coordinate carries weight 1 so that f integrates to 1;
  // the sparse part sits on non-constant trig functions
  p.lambda_star = Eigen::VectorXd::Zero(m);
  p.lambda_star[0] = 1.0;
  const auto support = draw_support(1, m, m_star, rng);
  Eigen::MatrixXd basis = p.dict.rows(grid.points);
  Eigen::VectorXd f;
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (int j : support) p.lambda_star[j] = rademacher(rng) * coef_mag;
    f = basis * p.lambda_star;
    if (f.minCoeff() >= 0.0) break;
    if (attempt == 99)
      throw std::runtime_error("gen_density: coefficient magnitude too large for a nonnegative density");
  }

  // piecewise-linear CDF on the grid, inverted cell by cell
  Eigen::VectorXd cdf(grid_points);
  cdf[0] = 0.0;
  for (int k = 1; k < grid_points; ++k)
    cdf[k] = cdf[k - 1] + 0.5 * (f[k - 1] + f[k]) * dx;
  const double mass = cdf[grid_points - 1];
  if (!(mass > 0.0)) throw std::runtime_error("gen_density: degenerate density");
  cdf /= mass;

  p.train.x.resize(n, 1);
  p.train.y.resize(0);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double* base = cdf.data();
    const int k = static_cast<int>(std::lower_bound(base + 1, base + grid_points, u) - base);
    const double span = cdf[k] - cdf[k - 1];
    const double frac = span > 0.0 ? (u - cdf[k - 1]) / span : 0.0;
    p.train.x(i, 0) = grid.points(k - 1, 0) + frac * dx;
  }
  p.grid = std::move(grid);
  return p;
}

Problem gen_classification(int n, int m, int m_star, double coef_mag, Rng& rng) {
  if (n < 0 || m < 1) throw std::invalid_argument("gen_classification: bad sizes");
  Problem p;
  p.task = Task::Classification;
  p.design = DesignKind::UniformPm1;
  p.lambda_star = Eigen::VectorXd::Zero(m);
  const auto support = draw_support(0, m, m_star, rng);
  for (int j : support) p.lambda_star[j] = rademacher(rng) * coef_mag;

  p.train.x.resize(n, m);
  p.train.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) p.train.x(i, j) = uniform_pm1(rng);
    const double e = p.eta(p.train.x.row(i).transpose());
    p.train.y[i] = rng.uniform() <= 0.5 * (1.0 + e) ? 1.0 : -1.0;
  }
  p.dict = make_stump_dictionary(m);
  p.dict.gram = n > 0 ? compute_gram(p.dict, p.train.x)
                      : Eigen::MatrixXd::Identity(m, m).eval();
  return p;
}

}  // namespace masp
