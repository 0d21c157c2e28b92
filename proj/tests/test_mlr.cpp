#include <doctest.h>

#include <cmath>

#include "ep/mlr.hpp"
#include "ep/rng.hpp"
#include "ep/util.hpp"
#include "helpers.hpp"

using namespace ep;

namespace {

struct Problem {
  Eigen::MatrixXd X;
  std::vector<DriveOutcome> y;
  std::vector<double> w;
};

Problem random_problem(std::size_t n, std::size_t p, std::uint64_t seed) {
  Problem pr;
  pr.X.resize(n, p);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    pr.X(i, 0) = 1.0;
    for (std::size_t j = 1; j < p; ++j) pr.X(i, j) = rng.next_real(-2.0, 2.0);
    pr.y.push_back(static_cast<DriveOutcome>(rng.next_below(kNumOutcomes)));
    pr.w.push_back(rng.next_real(0.2, 2.0));
  }
  return pr;
}

}  // namespace

TEST_SUITE("mlr") {

TEST_CASE("analytic gradient matches central finite differences") {
  const Problem pr = random_problem(200, 6, 21);
  const double l2 = 0.01;
  Rng rng(99);
  for (int point = 0; point < 5; ++point) {
    Eigen::MatrixXd theta(kMlrClasses, pr.X.cols());
    for (Eigen::Index r = 0; r < theta.rows(); ++r)
      for (Eigen::Index c = 0; c < theta.cols(); ++c) theta(r, c) = rng.next_real(-0.5, 0.5);

    const Eigen::MatrixXd grad = mlr_gradient(pr.X, pr.y, pr.w, theta, l2);
    const double h = 1e-5;
    double max_rel = 0.0;
    for (Eigen::Index r = 0; r < theta.rows(); ++r) {
      for (Eigen::Index c = 0; c < theta.cols(); ++c) {
        Eigen::MatrixXd up = theta, dn = theta;
        up(r, c) += h;
        dn(r, c) -= h;
        const double fd = (mlr_objective(pr.X, pr.y, pr.w, up, l2) -
                           mlr_objective(pr.X, pr.y, pr.w, dn, l2)) /
                          (2.0 * h);
        const double denom = std::max(1.0, std::abs(fd));
        max_rel = std::max(max_rel, std::abs(grad(r, c) - fd) / denom);
      }
    }
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("optimum satisfies the first-order condition and descent path") {
  const Problem pr = random_problem(300, 5, 33);
  MlrFitOptions opt;
  opt.l2 = 1e-4;
  MlrFitInfo info;
  const Eigen::MatrixXd theta = fit_mlr_coefficients(pr.X, pr.y, pr.w, opt, &info);
  CHECK(info.grad_max_norm <= opt.tol);
  CHECK(mlr_gradient(pr.X, pr.y, pr.w, theta, opt.l2).cwiseAbs().maxCoeff() <= opt.tol);
  for (std::size_t i = 1; i < info.objective_path.size(); ++i)
    CHECK(info.objective_path[i] <=
          info.objective_path[i - 1] + 1e-12 * (1.0 + std::abs(info.objective_path[i - 1])));
}

TEST_CASE("all outcomes NoScore concentrates mass on the reference") {
  std::vector<std::vector<PlayRecord>> drives;
  for (int i = 0; i < 40; ++i)
    drives.push_back(testing::make_drive("d" + std::to_string(i), 2, DriveOutcome::NoScore,
                                         5 + 2 * i, -6.0 + 0.3 * i));
  const PlayDataset ds = testing::make_dataset(drives);
  MlrFitOptions opt;
  opt.l2 = 1e-4;
  const MlrModel model = fit_weighted_multinomial_logit(ds, RecipeMode::Linear, opt);
  for (const auto& p : ds.plays()) {
    const ProbVector pv = model.predict_probs(p.x);
    CHECK(pv.of(DriveOutcome::NoScore) >= 0.99);
  }
  // The penalty keeps coefficients finite instead of diverging.
  CHECK(model.coefficients().cwiseAbs().maxCoeff() < 25.0);
}

TEST_CASE("duplicated row equals doubled weight within 1e-6") {
  const PlayDataset base = testing::random_dataset(10, 44, 3);  // ~30 rows
  REQUIRE(base.n_plays() >= 15);

  const FeatureRecipe recipe = FeatureRecipe::build(base, RecipeMode::Linear);
  const DesignMatrix dm = recipe.design(base);
  std::vector<DriveOutcome> y;
  for (const auto& p : base.plays()) y.push_back(p.outcome_drive);

  // Route A: duplicate row 0. Route B: double its weight.
  Eigen::MatrixXd Xdup(dm.values.rows() + 1, dm.values.cols());
  Xdup << dm.values, dm.values.row(0);
  std::vector<DriveOutcome> ydup = y;
  ydup.push_back(y[0]);
  std::vector<double> wdup(ydup.size(), 1.0);

  std::vector<double> wdouble(y.size(), 1.0);
  wdouble[0] = 2.0;

  MlrFitOptions opt;
  opt.l2 = 1e-4;
  const Eigen::MatrixXd a = fit_mlr_coefficients(Xdup, ydup, wdup, opt);
  const Eigen::MatrixXd b = fit_mlr_coefficients(dm.values, y, wdouble, opt);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("weight scale invariance: 10x weights with 10x l2") {
  const Problem pr = random_problem(150, 4, 55);
  MlrFitOptions opt;
  opt.l2 = 1e-3;
  const Eigen::MatrixXd a = fit_mlr_coefficients(pr.X, pr.y, pr.w, opt);

  Problem scaled = pr;
  for (double& w : scaled.w) w *= 10.0;
  MlrFitOptions opt10 = opt;
  opt10.l2 = opt.l2 * 10.0;
  const Eigen::MatrixXd b = fit_mlr_coefficients(scaled.X, scaled.y, scaled.w, opt10);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zero coefficients predict the uniform vector") {
  const Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(kMlrClasses, 3);
  Eigen::VectorXd x(3);
  x << 1.0, 0.4, -2.0;
  const ProbVector p = mlr_predict_row(theta, x);
  for (int k = 0; k < kNumOutcomes; ++k) CHECK(p[k] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("dominant touchdown logit saturates") {
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(kMlrClasses, 1);
  theta(0, 0) = 30.0;  // TD row; intercept-only design
  Eigen::VectorXd x(1);
  x << 1.0;
  const ProbVector p = mlr_predict_row(theta, x);
  CHECK(p.of(DriveOutcome::Touchdown) >= 1.0 - 1e-9);
}

TEST_CASE("hand-set coefficients match a manual softmax") {
  // Two columns: intercept and one covariate.
  Eigen::MatrixXd theta(kMlrClasses, 2);
  theta << 0.4, -0.2,   // TD
           0.1, 0.3,    // FG
           -1.0, 0.05,  // OPP_SAFETY
           -2.0, 0.6;   // OPP_TD
  Eigen::VectorXd x(2);
  x << 1.0, 1.7;

  std::array<double, kNumOutcomes> logits{};
  logits[0] = 0.4 - 0.2 * 1.7;
  logits[1] = 0.1 + 0.3 * 1.7;
  logits[2] = 0.0;
  logits[3] = -1.0 + 0.05 * 1.7;
  logits[4] = -2.0 + 0.6 * 1.7;
  double denom = 0.0;
  for (double v : logits) denom += std::exp(v);

  const ProbVector p = mlr_predict_row(theta, x);
  for (int k = 0; k < kNumOutcomes; ++k)
    CHECK(p[k] == doctest::Approx(std::exp(logits[k]) / denom).epsilon(1e-12));
}

TEST_CASE("rank-deficient design with l2=0 advises a positive penalty") {
  Problem pr = random_problem(60, 3, 66);
  Eigen::MatrixXd X(pr.X.rows(), 4);
  X << pr.X, pr.X.col(2);  // duplicate column
  MlrFitOptions opt;
  opt.l2 = 0.0;
  CHECK_THROWS_AS(fit_mlr_coefficients(X, pr.y, pr.w, opt), ConfigError);
}

TEST_CASE("model JSON round-trip preserves predictions") {
  const PlayDataset ds = testing::random_dataset(60, 77);
  MlrFitOptions opt;
  opt.l2 = 1e-4;
  const MlrModel model = fit_weighted_multinomial_logit(
      ds.with_weights(WeightScheme::InverseDriveLength), RecipeMode::AppendixDesign, opt);
  const MlrModel back = MlrModel::from_json(model.to_json());
  for (const auto& p : ds.plays()) {
    const ProbVector a = model.predict_probs(p.x);
    const ProbVector b = back.predict_probs(p.x);
    for (int k = 0; k < kNumOutcomes; ++k) CHECK(a[k] == b[k]);
  }
}

TEST_CASE("input validation") {
  Problem pr = random_problem(20, 3, 88);
  std::vector<double> zero_w(pr.y.size(), 0.0);
  CHECK_THROWS_AS(fit_mlr_coefficients(pr.X, pr.y, zero_w, {}), ConfigError);
  std::vector<double> short_w(pr.y.size() - 1, 1.0);
  CHECK_THROWS_AS(fit_mlr_coefficients(pr.X, pr.y, short_w, {}), ConfigError);
}

}  // TEST_SUITE
