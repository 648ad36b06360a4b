#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "masp/models.hpp"
#include "masp/rng.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

using namespace masp;

namespace {

Eigen::MatrixXd rademacher_design(int n, int m, Rng& rng) {
  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return x;
}

// trig dictionary with its Gram computed on a trapezoid grid over [0, 1]
// (the density loss needs one attached)
Dictionary trig_with_gram(int m, int grid_points = 4001) {
  Dictionary trig = make_trig_dictionary(m);
  Eigen::MatrixXd grid(grid_points, 1);
  Eigen::VectorXd w(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid(i, 0) = double(i) / (grid_points - 1);
    w[i] = (i == 0 || i == grid_points - 1) ? 0.5 / (grid_points - 1)
                                            : 1.0 / (grid_points - 1);
  }
  trig.gram = compute_gram(trig, grid, w);
  return trig;
}

}  // namespace

TEST_CASE("loss kind names round-trip and map to the right task") {
  const LossKind kinds[] = {LossKind::RegSquared,   LossKind::DensityL2,
                            LossKind::PhiSquared,   LossKind::PhiTruncated,
                            LossKind::PhiBoosting,  LossKind::PhiLogit,
                            LossKind::Hinge};
  for (LossKind k : kinds) CHECK(loss_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(loss_kind_from_string("nope"), std::invalid_argument);
  CHECK(task_of(LossKind::RegSquared) == Task::Regression);
  CHECK(task_of(LossKind::DensityL2) == Task::Density);
  CHECK(task_of(LossKind::PhiLogit) == Task::Classification);
  CHECK(task_of(LossKind::Hinge) == Task::Classification);
  CHECK(is_phi_loss(LossKind::PhiBoosting));
  CHECK(is_phi_loss(LossKind::PhiTruncated));
  CHECK_FALSE(is_phi_loss(LossKind::Hinge));
  CHECK_FALSE(is_phi_loss(LossKind::RegSquared));
}

TEST_CASE("dataset validation enforces shapes and +-1 labels") {
  Dataset d;
  d.x = Eigen::MatrixXd::Zero(3, 2);
  d.y = Eigen::VectorXd::Zero(3);
  CHECK_NOTHROW(d.validate(Task::Regression));
  Dataset bad = d;
  bad.y = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(bad.validate(Task::Regression), std::invalid_argument);
  Dataset lab = d;
  lab.y << 1.0, -1.0, 0.5;
  CHECK_THROWS_AS(lab.validate(Task::Classification), std::invalid_argument);
  lab.y << 1.0, -1.0, 1.0;
  CHECK_NOTHROW(lab.validate(Task::Classification));
  Dataset dens;
  dens.x = Eigen::MatrixXd::Zero(3, 1);
  CHECK_NOTHROW(dens.validate(Task::Density));
  // zero observations is legal (prior-mean fallback in the aggregators)
  Dataset empty;
  CHECK_NOTHROW(empty.validate(Task::Regression));
}

TEST_CASE("dataset CSV save/load round-trips exactly") {
  Rng rng(3);
  Dataset d;
  d.x = Eigen::MatrixXd(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) d.x(i, j) = 2.0 * rng.uniform() - 1.0;
  d.y = Eigen::VectorXd(4);
  for (int i = 0; i < 4; ++i) d.y[i] = rng.normal();
  const std::string path =
      (std::filesystem::temp_directory_path() / "masp_models_rt.csv").string();
  save_dataset_csv(path, d, true);
  Dataset back = load_dataset_csv(path, true);
  REQUIRE(back.x.rows() == 4);
  REQUIRE(back.x.cols() == 3);
  CHECK((back.x - d.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - d.y).cwiseAbs().maxCoeff() == 0.0);
  // density-style file without a response column
  save_dataset_csv(path, d, false);
  Dataset nox = load_dataset_csv(path, false);
  CHECK(nox.y.size() == 0);
  CHECK((nox.x - d.x).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("dictionary families evaluate to their defining functions") {
  Dictionary coord = make_coordinate_dictionary(3);
  Eigen::VectorXd x(3);
  x << 0.3, -0.7, 1.0;
  Eigen::VectorXd phi = coord.row(x);
  CHECK(phi[0] == doctest::Approx(0.3));
  CHECK(phi[1] == doctest::Approx(-0.7));
  CHECK(phi[2] == doctest::Approx(1.0));
  CHECK(coord.sup_bound() == doctest::Approx(1.0));

  Dictionary trig = make_trig_dictionary(3);
  Eigen::VectorXd t(1);
  t << 0.0;
  Eigen::VectorXd ph0 = trig.row(t);
  CHECK(ph0[0] == doctest::Approx(1.0));
  CHECK(ph0[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(ph0[2] == doctest::Approx(0.0));
  t << 0.25;
  Eigen::VectorXd ph1 = trig.row(t);
  CHECK(ph1[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ph1[2] == doctest::Approx(std::sqrt(2.0)));
  CHECK(trig.sup_bound() == doctest::Approx(std::sqrt(2.0)));

  Dictionary stumps = make_stump_dictionary(2);
  Eigen::VectorXd s(2);
  s << 0.4, -0.2;
  Eigen::VectorXd st = stumps.row(s);
  CHECK(st[0] == 1.0);
  CHECK(st[1] == -1.0);
  s << 0.0, 0.0;  // sign(0) counts as +1
  st = stumps.row(s);
  CHECK(st[0] == 1.0);
  CHECK(st[1] == 1.0);
  CHECK(stumps.binary_raw);
}

TEST_CASE("gram matrices: Rademacher diagonal is exactly one, trig grid is identity") {
  Rng rng(17);
  Dictionary coord = make_coordinate_dictionary(4);
  Eigen::MatrixXd x = rademacher_design(200, 4, rng);
  Eigen::MatrixXd g = compute_gram(coord, x);
  for (int j = 0; j < 4; ++j) CHECK(g(j, j) == doctest::Approx(1.0).epsilon(1e-15));

  Dictionary trig = make_trig_dictionary(5);
  const int gp = 4001;
  Eigen::MatrixXd grid(gp, 1);
  Eigen::VectorXd w(gp);
  for (int i = 0; i < gp; ++i) {
    grid(i, 0) = double(i) / (gp - 1);
    w[i] = (i == 0 || i == gp - 1) ? 0.5 / (gp - 1) : 1.0 / (gp - 1);
  }
  Eigen::MatrixXd gt = compute_gram(trig, grid, w);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
  CHECK((gt - id).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("normalization is idempotent, homogeneous, and rejects dead functions") {
  Rng rng(29);
  Dictionary coord = make_coordinate_dictionary(3);
  Eigen::MatrixXd x(100, 3);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = 2.0 * rng.uniform() - 1.0;

  Dictionary n1 = normalize_dictionary(coord, x);
  Dictionary n2 = normalize_dictionary(n1, x);
  CHECK((n1.scale - n2.scale).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(n1.gram.has_value());
  for (int j = 0; j < 3; ++j)
    CHECK((*n1.gram)(j, j) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n1.trace_gram() == doctest::Approx(3.0).epsilon(1e-12));

  // pre-scaling a function is washed out by normalization
  Dictionary scaled = coord;
  scaled.scale[1] *= 37.0;
  Dictionary n3 = normalize_dictionary(scaled, x);
  CHECK((n3.scale - n1.scale).cwiseAbs().maxCoeff() < 1e-12);

  // already unit-norm dictionary is unchanged
  Eigen::MatrixXd pm = rademacher_design(50, 3, rng);
  Dictionary n4 = normalize_dictionary(coord, pm);
  CHECK((n4.scale - coord.scale).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd dead = x;
  dead.col(2).setZero();
  CHECK_THROWS_AS(normalize_dictionary(coord, dead), std::invalid_argument);
}

TEST_CASE("margin-loss registry returns the pinned constants") {
  const PhiSpec sq = phi_registry(LossKind::PhiSquared, 1.0, 1.0);
  CHECK(sq.beta_phi == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(sq.c_phi == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(sq.value(0.0) == doctest::Approx(1.0));
  CHECK(sq.deriv(0.0) == doctest::Approx(2.0));

  const PhiSpec tr = phi_registry(LossKind::PhiTruncated, 1.0, 1.0);
  CHECK(tr.beta_phi == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(tr.value(-2.0) == 0.0);
  CHECK(tr.deriv(-2.0) == 0.0);
  CHECK(tr.value(1.0) == doctest::Approx(4.0));

  const PhiSpec bo = phi_registry(LossKind::PhiBoosting, 1.0, 1.0);
  CHECK(bo.beta_phi == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(bo.c_phi == doctest::Approx(4.0 * std::exp(1.0)).epsilon(1e-15));

  const PhiSpec lo = phi_registry(LossKind::PhiLogit, 1.0, 1.0);
  CHECK(lo.beta_phi == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(lo.c_phi == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lo.value(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(lo.deriv(0.0) == doctest::Approx(0.5));
  CHECK(lo.value(700.0) == doctest::Approx(700.0).epsilon(1e-12));  // no overflow

  CHECK_THROWS_AS(phi_registry(LossKind::Hinge, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(phi_registry(LossKind::RegSquared, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi_registry(LossKind::PhiLogit, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("smoothing ramp: pinned value, sandwich, curvature window") {
  CHECK(k_eps(std::sqrt(3.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k_eps(-2.0, 0.5) == 0.0);
  CHECK(k_eps(0.0, 0.5) == 0.0);
  CHECK(k_eps_prime(-1.0, 0.5) == 0.0);
  const double eps = 0.3;
  for (double z = -1.0; z <= 3.0; z += 0.01) {
    const double v = k_eps(z, eps);
    const double ramp = std::max(z, 0.0);
    CHECK(v <= ramp + 1e-15);
    CHECK(v >= ramp - eps - 1e-15);
    // derivative is 1-Lipschitz toward 1
    CHECK(k_eps_prime(z, eps) >= 0.0);
    CHECK(k_eps_prime(z, eps) <= 1.0);
  }
  // second derivative by finite differences stays in (0, 1/eps]
  for (double z = 0.05; z <= 2.0; z += 0.05) {
    const double h = 1e-5;
    const double d2 =
        (k_eps(z + h, eps) - 2.0 * k_eps(z, eps) + k_eps(z - h, eps)) / (h * h);
    CHECK(d2 > 0.0);
    CHECK(d2 <= 1.0 / eps + 1e-6);
  }
  CHECK_THROWS_AS(k_eps(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("observation losses reproduce hand-computed values") {
  Dictionary coord = make_coordinate_dictionary(2);
  Eigen::VectorXd x(2), lam(2);

  LossModel reg{LossKind::RegSquared, 1e-3};
  x << 1.0, 0.0;
  lam << 0.0, 0.0;
  CHECK(q_value(reg, coord, x, 2.0, lam) == doctest::Approx(4.0).epsilon(1e-15));

  LossModel hinge{LossKind::Hinge, 1e-3};
  CHECK(q_value(hinge, coord, x, 1.0, lam) == doctest::Approx(1.0).epsilon(1e-15));
  // comfortably correct classification: zero loss and zero gradient
  lam << 2.0, 0.0;
  CHECK(q_value(hinge, coord, x, 1.0, lam) == 0.0);
  CHECK(q_grad(hinge, coord, x, 1.0, lam).norm() == 0.0);

  Dictionary trig = trig_with_gram(3);
  LossModel dens{LossKind::DensityL2, 1e-3};
  Eigen::VectorXd t(1);
  t << 0.2;
  Eigen::VectorXd lz = Eigen::VectorXd::Zero(3);
  CHECK(q_value(dens, trig, t, 0.0, lz) == 0.0);
}

TEST_CASE("density loss satisfies q + 2 f(x) - lambda' G lambda = 0") {
  Dictionary trig = trig_with_gram(5);
  REQUIRE(trig.gram.has_value());
  LossModel dens{LossKind::DensityL2, 1e-3};
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::VectorXd lam(5);
    for (int j = 0; j < 5; ++j) lam[j] = rng.normal() * 0.5;
    Eigen::VectorXd x(1);
    x << rng.uniform();
    const double q = q_value(dens, trig, x, 0.0, lam);
    const double f = trig.predict(lam, x);
    const double quad = lam.dot((*trig.gram) * lam);
    CHECK(q + 2.0 * f - quad == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("loss gradients match finite differences (smoothed hinge included)") {
  Rng rng(41);
  Dictionary coord = make_coordinate_dictionary(3);
  Dictionary trig = trig_with_gram(3);
  const double h = 1e-6;
  const LossKind kinds[] = {LossKind::RegSquared,  LossKind::DensityL2,
                            LossKind::PhiSquared,  LossKind::PhiTruncated,
                            LossKind::PhiBoosting, LossKind::PhiLogit,
                            LossKind::Hinge};
  for (LossKind kind : kinds) {
    LossModel model{kind, 0.05};
    const bool density = kind == LossKind::DensityL2;
    const Dictionary& dict = density ? trig : coord;
    const Eigen::MatrixXd* gram = density ? &*trig.gram : nullptr;
    for (int rep = 0; rep < 30; ++rep) {
      Eigen::VectorXd x;
      if (density) {
        x = Eigen::VectorXd(1);
        x << rng.uniform();
      } else {
        x = Eigen::VectorXd(3);
        for (int j = 0; j < 3; ++j) x[j] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      }
      const double y = task_of(kind) == Task::Classification
                           ? (rng.uniform() < 0.5 ? -1.0 : 1.0)
                           : rng.normal();
      Eigen::VectorXd lam(3);
      for (int j = 0; j < 3; ++j) lam[j] = 0.5 * rng.normal();
      const Eigen::VectorXd phi = dict.row(x);
      // margin kinks: stay away from the truncation corner
      if (kind == LossKind::PhiTruncated &&
          std::abs(1.0 - y * phi.dot(lam)) < 1e-3)
        continue;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(3);
      add_q_grad_row(model, phi, y, lam, gram, grad);
      CHECK((grad - q_grad(model, dict, x, y, lam)).cwiseAbs().maxCoeff() <
            1e-12);
      for (int j = 0; j < 3; ++j) {
        Eigen::VectorXd lp = lam, lm = lam;
        lp[j] += h;
        lm[j] -= h;
        const double fp = q_value_smoothed_row(model, phi, y, lp, gram);
        const double fm = q_value_smoothed_row(model, phi, y, lm, gram);
        const double fd = (fp - fm) / (2 * h);
        CHECK(grad[j] ==
              doctest::Approx(fd).epsilon(2e-5).scale(std::max(1.0, std::abs(fd))));
      }
    }
  }
}

TEST_CASE("smoothed hinge only differs from the exact hinge near the kink") {
  LossModel model{LossKind::Hinge, 0.05};
  Eigen::VectorXd phi(2), lam(2);
  phi << 1.0, -1.0;
  lam << 0.3, 0.2;
  const double margin = 1.0 - 1.0 * phi.dot(lam);  // = 0.9, far from 0
  const double exact = q_value_row(model, phi, 1.0, lam, nullptr);
  const double smooth = q_value_smoothed_row(model, phi, 1.0, lam, nullptr);
  CHECK(exact == doctest::Approx(margin).epsilon(1e-15));
  CHECK(smooth <= exact);
  CHECK(smooth >= exact - model.hinge_eps);
}

TEST_CASE("risk evaluators: exact zero at truth, unit miss, Bayes-blind coin") {
  Rng rng(53);
  Dictionary coord = make_coordinate_dictionary(3);
  Eigen::MatrixXd eval = rademacher_design(500, 3, rng);
  Eigen::VectorXd star(3);
  star << 0.4, 0.0, -0.2;
  CHECK(regression_risk(coord, star, star, eval) <= 1e-10);
  Eigen::VectorXd e1(3), zero = Eigen::VectorXd::Zero(3);
  e1 << 1.0, 0.0, 0.0;
  // orthonormal family on the +-1 design: missing the unit direction costs 1
  CHECK(regression_risk(coord, zero, e1, eval) == doctest::Approx(1.0).epsilon(1e-12));

  Dictionary trig = trig_with_gram(4);
  Eigen::VectorXd a(4), b(4);
  a << 1.0, 0.3, 0.0, -0.1;
  b << 1.0, 0.0, 0.2, 0.0;
  const Eigen::MatrixXd& g = *trig.gram;
  CHECK(density_ise(g, a, b) ==
        doctest::Approx((a - b).dot(g * (a - b))).epsilon(1e-14));
  CHECK(density_ise(g, a, a) == 0.0);

  // eta constant 0.5 and a zero score: excess misclassification 0.25 (ties half)
  LossModel logit{LossKind::PhiLogit, 1e-3};
  Dictionary stumps = make_stump_dictionary(2);
  Eigen::MatrixXd ex(200, 2);
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 2; ++j) ex(i, j) = 2.0 * rng.uniform() - 1.0;
  auto eta_half = [](const Eigen::VectorXd&) { return 0.5; };
  ClassificationRisk r =
      classification_risk(logit, stumps, Eigen::VectorXd::Zero(2), eta_half, ex);
  CHECK(r.excess_misclass == doctest::Approx(0.25).epsilon(1e-12));
  // aligned score removes the misclassification excess entirely
  Eigen::VectorXd aligned(2);
  aligned << 0.5, 0.0;
  auto eta_sign = [](const Eigen::VectorXd& x) { return x[0] >= 0.0 ? 0.5 : -0.5; };
  ClassificationRisk r2 =
      classification_risk(logit, stumps, aligned, eta_sign, ex);
  CHECK(r2.excess_misclass == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r2.excess_phi >= -1e-12);

  // empty evaluation samples are rejected
  Eigen::MatrixXd none(0, 3);
  CHECK_THROWS_AS(regression_risk(coord, star, star, none),
                  std::invalid_argument);
  Eigen::MatrixXd none2(0, 2);
  CHECK_THROWS_AS(classification_risk(logit, stumps, aligned, eta_half, none2),
                  std::invalid_argument);
}
