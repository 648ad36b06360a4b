#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "masp/tuning.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace masp;

namespace {

TuningInputs base_inputs() {
  TuningInputs in;
  in.beta = 1.0;
  in.n = 100;
  in.m = 4;
  in.radius = 1.0;
  in.trace_gram = 4.0;
  in.sigma2 = 1.0;
  in.l_density = 2.0;
  in.l_phi = 1.0;
  in.m_star = 4;
  return in;
}

// feasibility predicate of the density temperature rule
bool density_feasible(double beta, double r, double l) {
  return (beta - 2.0 * r * r) * std::exp(-4.0 * r * (l + std::sqrt(l)) / beta) >=
         2.0 * l + 4.0 * r * l;
}

}  // namespace

TEST_CASE("spike scale: explicit values and the radius guard branch") {
  TuningInputs in = base_inputs();
  CHECK(choose_tau(in, false) == doctest::Approx(0.05).epsilon(1e-15));
  in.radius = 0.1;  // guard branch R / (4M) takes over
  CHECK(choose_tau(in, false) == doctest::Approx(0.00625).epsilon(1e-15));
  in.radius = 1.0;
  // trace variant with tr(Gram) = M is the same rule
  CHECK(choose_tau(in, true) == doctest::Approx(choose_tau(in, false)).epsilon(1e-15));
  in.trace_gram = 8.0;  // doubling the trace shrinks tau by sqrt(2)
  CHECK(choose_tau(in, true) ==
        doctest::Approx(0.05 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("temperature: regression, margin, and hinge closed forms") {
  TuningInputs in = base_inputs();
  CHECK(choose_beta(LossKind::RegSquared, in) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(choose_beta(LossKind::Hinge, in) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(choose_beta(LossKind::PhiSquared, in) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(choose_beta(LossKind::PhiLogit, in) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-15));

  CHECK(choose_beta_regression_general(1.0, 2.0, 1.0, 1.0,
                                       std::numeric_limits<double>::infinity()) ==
        doctest::Approx(10.0).epsilon(1e-15));
  CHECK(choose_beta_regression_general(1.0, 2.0, 1.0, 1.0, 0.1) ==
        doctest::Approx(40.0).epsilon(1e-15));
}

TEST_CASE("density temperature: shortcut table and grid minimality") {
  TuningInputs in = base_inputs();
  in.l_density = 2.0;
  in.radius = 1.0;
  CHECK(choose_beta(LossKind::DensityL2, in, true) ==
        doctest::Approx(24.0).epsilon(1e-15));
  in.radius = 2.0;
  CHECK(choose_beta(LossKind::DensityL2, in, true) ==
        doctest::Approx(46.0).epsilon(1e-15));
  in.radius = 1.5;  // shortcut table only covers R in {1, 2}
  CHECK_THROWS_AS(choose_beta(LossKind::DensityL2, in, true),
                  std::invalid_argument);
  in.radius = 1.0;
  in.l_density = 1.0;  // shortcut table needs L >= 2
  CHECK_THROWS_AS(choose_beta(LossKind::DensityL2, in, true),
                  std::invalid_argument);

  // grid solver: returned value is feasible, previous grid point is not
  in.l_density = 3.0;
  in.radius = 1.5;
  const double beta = choose_beta(LossKind::DensityL2, in, false);
  CHECK(density_feasible(beta, in.radius, in.l_density));
  const double lo = 2.0 * in.radius * in.radius;
  const double hi = 1e6 * std::max(in.l_density, 1.0);
  const double step = std::pow(hi / lo, 1.0 / 9999.0);
  if (beta > lo * (1.0 + 1e-9))
    CHECK_FALSE(density_feasible(beta / step, in.radius, in.l_density));

  // the closed-form shortcut is itself feasible, so the grid can't exceed it
  in.l_density = 2.0;
  in.radius = 1.0;
  const double grid = choose_beta(LossKind::DensityL2, in, false);
  CHECK(density_feasible(grid, 1.0, 2.0));
  CHECK(grid <= 24.0 * step);
}

TEST_CASE("data-driven radius reproduces the pinned example and clips at zero") {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  CHECK(data_driven_radius(ones, 0.0, 1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(data_driven_radius(Eigen::VectorXd::Zero(4), 0.0, 1) == 0.0);
  CHECK(data_driven_radius(ones, 2.0, 1) == 0.0);  // noise floor above signal
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  CHECK(data_driven_radius(y, 1.0, 2) ==
        doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("sparsity bound: pinned value, zero-support reduction, form ordering") {
  TuningInputs in = base_inputs();
  in.beta = 1.0;
  in.n = 0;  // bound formula is well-defined before any data arrives
  in.m = 2;
  in.trace_gram = 2.0;
  const double tau = 0.1;
  Eigen::VectorXd star(2);
  star << tau * (std::exp(1.0) - 1.0), 0.0;  // log(1 + |l|/tau) = 1 exactly
  const double full = soi_bound(0.0, star, in, tau, SparsityBoundForm::Full);
  CHECK(full == doctest::Approx(5.08).epsilon(1e-12));
  const double l0 = soi_bound(0.0, star, in, tau, SparsityBoundForm::L0);
  CHECK(l0 == doctest::Approx(4.0 * std::log(11.0) + 0.08 + 1.0).epsilon(1e-12));
  CHECK(full <= l0 + 1e-15);

  // lambda* = 0: both forms collapse to remainder + price-of-aggregation
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const double expect = 4.0 * tau * tau * in.trace_gram + in.beta / (in.n + 1);
  CHECK(soi_bound(0.0, zero, in, tau, SparsityBoundForm::Full) ==
        doctest::Approx(expect).epsilon(1e-14));
  CHECK(soi_bound(0.0, zero, in, tau, SparsityBoundForm::L0) ==
        doctest::Approx(expect).epsilon(1e-14));

  // oracle loss enters additively; beta enters monotonically
  CHECK(soi_bound(1.0, star, in, tau, SparsityBoundForm::Full) ==
        doctest::Approx(full + 1.0).epsilon(1e-14));
  TuningInputs hot = in;
  hot.beta = 200.0;
  CHECK(soi_bound(0.0, star, hot, tau, SparsityBoundForm::Full) > full);
}

TEST_CASE("bound preconditions: dimension, radius margin, reference in shrunken ball") {
  TuningInputs in = base_inputs();
  in.m = 1;
  Eigen::VectorXd star1 = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(soi_bound(0.0, star1, in, 0.01, SparsityBoundForm::Full),
                  std::invalid_argument);
  in = base_inputs();
  Eigen::VectorXd star = Eigen::VectorXd::Zero(4);
  // radius must exceed 2 M tau
  CHECK_THROWS_AS(soi_bound(0.0, star, in, 0.2, SparsityBoundForm::Full),
                  std::invalid_argument);
  // reference must fit in the shrunken ball
  Eigen::VectorXd big = Eigen::VectorXd::Zero(4);
  big[0] = 0.99;
  CHECK_THROWS_AS(soi_bound(0.0, big, in, 0.05, SparsityBoundForm::Full),
                  std::invalid_argument);
  CHECK_NOTHROW(soi_bound(0.0, star, in, 0.05, SparsityBoundForm::Full));
}

TEST_CASE("smooth-margin bound collapses to its remainder at zero support") {
  TuningInputs in = base_inputs();
  in.beta = 8.0;
  in.n = 99;
  in.m = 3;
  const double tau = 0.05;
  const PhiSpec spec = phi_registry(LossKind::PhiSquared, in.radius, in.l_phi);
  Eigen::VectorXd norms = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const double expect = 0.3 + spec.c_phi * tau * tau * 3.0 + 8.0 / 100.0;
  CHECK(classif_bound(0.3, zero, in, tau, spec, norms) ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("hinge bound decays like 1/sqrt(n) under the hinge temperature rule") {
  const double tau = 1e-4;  // fixed tiny spike scale across the n-grid
  std::vector<double> xs, ys;
  for (double n : {1e2, 1e4, 1e6}) {
    TuningInputs in = base_inputs();
    in.n = int(n);
    in.beta = choose_beta(LossKind::Hinge, in);  // (1 + R L) sqrt(n / M*)
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(in.m);
    const double b = hinge_bound(0.0, zero, in, tau);
    CHECK(b > 0.0);
    xs.push_back(std::log(n));
    ys.push_back(std::log(b));
  }
  double xm = 0, ym = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= xs.size();
  ym /= ys.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  const double slope = num / den;
  CHECK(std::abs(slope + 0.5) < 0.1);
}

TEST_CASE("hinge bound diverges as beta grows with n fixed") {
  TuningInputs in = base_inputs();
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(in.m);
  in.beta = 1e6;
  const double b1 = hinge_bound(0.0, zero, in, 1e-4);
  in.beta = 1e9;
  const double b2 = hinge_bound(0.0, zero, in, 1e-4);
  CHECK(b2 > b1);
  CHECK(b2 > 1e6);  // dominated by beta / (n+1)
}
