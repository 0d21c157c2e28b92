#include "ep/mlr.hpp"

#include <cmath>

#include "ep/util.hpp"

namespace ep {

namespace {

// Canonical outcome index -> coefficient row (-1 for the reference).
inline int class_row(int outcome) {
  if (outcome == kMlrReference) return -1;
  return outcome < kMlrReference ? outcome : outcome - 1;
}

inline int row_to_outcome(int row) { return row < kMlrReference ? row : row + 1; }

// Non-reference class probabilities, one row per observation.
Eigen::MatrixXd class_probs(const Eigen::MatrixXd& X, const Eigen::MatrixXd& theta) {
  Eigen::MatrixXd eta = X * theta.transpose();  // n x C
  Eigen::MatrixXd probs(eta.rows(), eta.cols());
  for (Eigen::Index i = 0; i < eta.rows(); ++i) {
    double m = 0.0;  // reference logit
    for (Eigen::Index c = 0; c < eta.cols(); ++c) m = std::max(m, eta(i, c));
    double denom = std::exp(-m);
    for (Eigen::Index c = 0; c < eta.cols(); ++c) denom += std::exp(eta(i, c) - m);
    for (Eigen::Index c = 0; c < eta.cols(); ++c)
      probs(i, c) = std::exp(eta(i, c) - m) / denom;
  }
  return probs;
}

void check_inputs(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                  const std::vector<double>& w) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.size() != w.size())
    throw ConfigError("mlr: X, y, w must have matching lengths");
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || std::isnan(v)) throw ConfigError("mlr: weights must be >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw ConfigError("mlr: weights must not all be zero");
}

}  // namespace

double mlr_objective(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                     const std::vector<double>& w, const Eigen::MatrixXd& theta, double l2) {
  Eigen::MatrixXd eta = X * theta.transpose();
  double nll = 0.0;
  for (Eigen::Index i = 0; i < eta.rows(); ++i) {
    if (w[i] == 0.0) continue;
    double m = 0.0;
    for (Eigen::Index c = 0; c < eta.cols(); ++c) m = std::max(m, eta(i, c));
    double denom = std::exp(-m);
    for (Eigen::Index c = 0; c < eta.cols(); ++c) denom += std::exp(eta(i, c) - m);
    double lse = m + std::log(denom);
    const int row = class_row(static_cast<int>(y[i]));
    const double target_logit = row < 0 ? 0.0 : eta(i, row);
    nll += w[i] * (lse - target_logit);
  }
  return nll + 0.5 * l2 * theta.squaredNorm();
}

Eigen::MatrixXd mlr_gradient(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                             const std::vector<double>& w, const Eigen::MatrixXd& theta,
                             double l2) {
  const Eigen::MatrixXd probs = class_probs(X, theta);
  Eigen::MatrixXd resid = probs;  // w * (p - 1{y=c})
  for (Eigen::Index i = 0; i < resid.rows(); ++i) {
    const int row = class_row(static_cast<int>(y[i]));
    if (row >= 0) resid(i, row) -= 1.0;
    resid.row(i) *= w[i];
  }
  return resid.transpose() * X + l2 * theta;
}

Eigen::MatrixXd fit_mlr_coefficients(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                                     const std::vector<double>& w, const MlrFitOptions& opt,
                                     MlrFitInfo* info) {
  check_inputs(X, y, w);
  if (opt.l2 < 0.0) throw ConfigError("mlr: l2 must be >= 0");
  const Eigen::Index P = X.cols();
  const int C = kMlrClasses;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(C, P);  // convex problem; zero start

  double obj = mlr_objective(X, y, w, theta, opt.l2);
  std::vector<double> path{obj};
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    const Eigen::MatrixXd grad = mlr_gradient(X, y, w, theta, opt.l2);
    const double gmax = grad.cwiseAbs().maxCoeff();
    if (gmax <= opt.tol) {
      if (info) *info = {iter, gmax, obj, std::move(path)};
      return theta;
    }

    // Full Hessian over the (C*P)-dim flattened parameter.
    const Eigen::MatrixXd probs = class_probs(X, theta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(C * P, C * P);
    Eigen::VectorXd coef(X.rows());
    for (int c = 0; c < C; ++c) {
      for (int d = c; d < C; ++d) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
          const double pc = probs(i, c), pd = probs(i, d);
          coef[i] = w[i] * (c == d ? pc * (1.0 - pc) : -pc * pd);
        }
        const Eigen::MatrixXd block = X.transpose() * coef.asDiagonal() * X;
        H.block(c * P, d * P, P, P) = block;
        if (d != c) H.block(d * P, c * P, P, P) = block.transpose();
      }
    }
    H.diagonal().array() += opt.l2;

    Eigen::VectorXd g_flat(C * P);
    for (int c = 0; c < C; ++c) g_flat.segment(c * P, P) = grad.row(c).transpose();

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (opt.l2 == 0.0) {
      const Eigen::VectorXd D = ldlt.vectorD();
      if (D.minCoeff() < 1e-10 * std::max(1.0, D.maxCoeff()))
        throw ConfigError("mlr: rank-deficient design with l2=0; set l2 > 0");
    }
    Eigen::VectorXd d_flat = ldlt.solve(-g_flat);
    const double resid = (H * d_flat + g_flat).cwiseAbs().maxCoeff();
    if (!d_flat.allFinite() || resid > 1e-6 * std::max(1.0, g_flat.cwiseAbs().maxCoeff()))
      throw NumericError("mlr: Newton system solve failed (residual " + std::to_string(resid) +
                         ")");

    Eigen::MatrixXd dir(C, P);
    for (int c = 0; c < C; ++c) dir.row(c) = d_flat.segment(c * P, P).transpose();

    const double slope = g_flat.dot(d_flat);
    if (-slope <= 1e-12 * (1.0 + std::abs(obj))) {
      // Predicted decrease is below floating-point resolution of the
      // objective; Armijo cannot certify progress here, so take the pure
      // Newton step and let the gradient test terminate.
      theta += dir;
      obj = mlr_objective(X, y, w, theta, opt.l2);
      path.push_back(obj);
      continue;
    }

    // Armijo backtracking keeps the objective non-increasing.
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const double cand = mlr_objective(X, y, w, theta + step * dir, opt.l2);
      if (cand <= obj + 1e-4 * step * slope) {
        theta += step * dir;
        obj = cand;
        path.push_back(obj);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw NumericError("mlr: line search failed; gradient max-norm = " + std::to_string(gmax));
  }

  const double gmax = mlr_gradient(X, y, w, theta, opt.l2).cwiseAbs().maxCoeff();
  if (gmax <= opt.tol) {
    if (info) *info = {iter, gmax, obj, std::move(path)};
    return theta;
  }
  throw NumericError("mlr: no convergence after " + std::to_string(opt.max_iter) +
                     " iterations; gradient max-norm = " + std::to_string(gmax));
}

ProbVector mlr_predict_row(const Eigen::MatrixXd& theta, const Eigen::VectorXd& x) {
  std::array<double, kNumOutcomes> logits{};
  for (int k = 0; k < kNumOutcomes; ++k) {
    const int row = class_row(k);
    logits[k] = row < 0 ? 0.0 : theta.row(row).dot(x);
  }
  return softmax5(logits);
}

MlrModel fit_weighted_multinomial_logit(const PlayDataset& ds, RecipeMode mode,
                                        const MlrFitOptions& opt,
                                        std::vector<std::string> linear_cols) {
  if (ds.n_plays() == 0) throw DataError("mlr: empty dataset");
  FeatureRecipe recipe = FeatureRecipe::build(ds, mode, std::move(linear_cols));
  const DesignMatrix dm = recipe.design(ds);
  std::vector<DriveOutcome> y;
  y.reserve(ds.n_plays());
  for (const PlayRecord& p : ds.plays()) y.push_back(p.outcome_drive);
  MlrFitInfo info;
  Eigen::MatrixXd theta = fit_mlr_coefficients(dm.values, y, ds.weights(), opt, &info);
  return MlrModel(std::move(recipe), std::move(theta), opt, info);
}

nlohmann::json MlrModel::to_json() const {
  std::vector<std::vector<double>> coef(coefficients_.rows());
  for (Eigen::Index r = 0; r < coefficients_.rows(); ++r) {
    coef[r].resize(coefficients_.cols());
    for (Eigen::Index c = 0; c < coefficients_.cols(); ++c) coef[r][c] = coefficients_(r, c);
  }
  std::vector<std::string> class_order;
  for (int r = 0; r < kMlrClasses; ++r)
    class_order.push_back(outcome_label(static_cast<DriveOutcome>(row_to_outcome(r))));
  return nlohmann::json{
      {"format_version", 1},
      {"type", "mlr"},
      {"reference", outcome_label(static_cast<DriveOutcome>(kMlrReference))},
      {"class_order", class_order},
      {"coefficients", coef},
      {"recipe", recipe_.to_json()},
      {"l2", options_.l2},
      {"tol", options_.tol},
      {"max_iter", options_.max_iter},
      {"fit", {{"iterations", info_.iterations},
               {"grad_max_norm", info_.grad_max_norm},
               {"objective", info_.objective}}},
  };
}

MlrModel MlrModel::from_json(const nlohmann::json& j) {
  if (j.at("type").get<std::string>() != "mlr")
    throw ConfigError("MlrModel: wrong model type in JSON");
  const auto coef = j.at("coefficients").get<std::vector<std::vector<double>>>();
  if (coef.size() != kMlrClasses) throw ConfigError("MlrModel: bad coefficient shape");
  Eigen::MatrixXd theta(kMlrClasses, coef.empty() ? 0 : coef[0].size());
  for (std::size_t r = 0; r < coef.size(); ++r) {
    if (coef[r].size() != static_cast<std::size_t>(theta.cols()))
      throw ConfigError("MlrModel: ragged coefficient rows");
    for (std::size_t c = 0; c < coef[r].size(); ++c)
      theta(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = coef[r][c];
  }
  MlrFitOptions opt;
  opt.l2 = j.at("l2").get<double>();
  opt.tol = j.at("tol").get<double>();
  opt.max_iter = j.at("max_iter").get<int>();
  MlrFitInfo info;
  info.iterations = j.at("fit").at("iterations").get<int>();
  info.grad_max_norm = j.at("fit").at("grad_max_norm").get<double>();
  info.objective = j.at("fit").at("objective").get<double>();
  FeatureRecipe recipe = FeatureRecipe::from_json(j.at("recipe"));
  if (recipe.n_columns() != static_cast<std::size_t>(theta.cols()))
    throw ConfigError("MlrModel: recipe mismatch (column count)");
  return MlrModel(std::move(recipe), std::move(theta), opt, info);
}

}  // namespace ep
