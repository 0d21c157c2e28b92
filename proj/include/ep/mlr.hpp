#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ep/dataset.hpp"
#include "ep/features.hpp"

#include <json.hpp>

namespace ep {

// Multinomial logistic regression with NoScore as the reference class:
// log(P(k|x) / P(NoScore|x)) = theta_k . x for each non-reference k.
// Coefficient rows follow canonical outcome order with NoScore skipped.

inline constexpr int kMlrReference = static_cast<int>(DriveOutcome::NoScore);
inline constexpr int kMlrClasses = kNumOutcomes - 1;

struct MlrFitOptions {
  double l2 = 1e-6;  // ridge strength; > 0 keeps the problem identifiable
  double tol = 1e-8;  // gradient max-norm at the optimum
  int max_iter = 200;
};

struct MlrFitInfo {
  int iterations = 0;
  double grad_max_norm = 0.0;
  double objective = 0.0;
  std::vector<double> objective_path;  // objective after each accepted step
};

// Weighted negative log-likelihood + (l2/2)*||theta||^2 and its gradient,
// exposed for finite-difference checks. theta is (K-1) x P.
double mlr_objective(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                     const std::vector<double>& w, const Eigen::MatrixXd& theta, double l2);
Eigen::MatrixXd mlr_gradient(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                             const std::vector<double>& w, const Eigen::MatrixXd& theta,
                             double l2);

// Damped-Newton solver on the raw design matrix.
Eigen::MatrixXd fit_mlr_coefficients(const Eigen::MatrixXd& X, const std::vector<DriveOutcome>& y,
                                     const std::vector<double>& w, const MlrFitOptions& opt,
                                     MlrFitInfo* info = nullptr);

ProbVector mlr_predict_row(const Eigen::MatrixXd& theta, const Eigen::VectorXd& x);

class MlrModel {
 public:
  MlrModel() = default;
  MlrModel(FeatureRecipe recipe, Eigen::MatrixXd coefficients, MlrFitOptions options,
           MlrFitInfo info)
      : recipe_(std::move(recipe)),
        coefficients_(std::move(coefficients)),
        options_(options),
        info_(info) {}

  ProbVector predict_probs(const GameState& x) const {
    return mlr_predict_row(coefficients_, recipe_.row(x));
  }

  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  const FeatureRecipe& recipe() const { return recipe_; }
  const MlrFitInfo& fit_info() const { return info_; }

  nlohmann::json to_json() const;
  static MlrModel from_json(const nlohmann::json& j);

 private:
  FeatureRecipe recipe_;
  Eigen::MatrixXd coefficients_;  // (K-1) x P
  MlrFitOptions options_;
  MlrFitInfo info_;
};

// Builds the recipe on the dataset, then fits on its design matrix with
// the dataset's weights.
MlrModel fit_weighted_multinomial_logit(const PlayDataset& ds, RecipeMode mode,
                                        const MlrFitOptions& opt = {},
                                        std::vector<std::string> linear_cols = {
                                            "yardline_100", "posteam_spread"});

}  // namespace ep
