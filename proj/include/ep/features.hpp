#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ep/dataset.hpp"

#include <json.hpp>

namespace ep {

// Cubic-by-default B-spline basis configuration. Exactly one of df /
// interior_knots is given (or both, consistently: df = degree + #knots).
struct SplineSpec {
  int degree = 3;
  std::optional<int> df;
  std::optional<std::vector<double>> interior_knots;
  double lo = 0.0;
  double hi = 1.0;
};

struct DesignMatrix {
  std::vector<std::string> col_names;
  Eigen::MatrixXd values;  // rows x cols, no NaN/inf

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return col_names.size(); }
};

// Interior knots for a df-spec basis: equi-probability quantiles of x.
std::vector<double> quantile_knots(std::vector<double> x, int n_knots);

// Full clamped B-spline basis on [lo, hi] with the given interior knots,
// leading constant column dropped, giving degree + #knots columns. The
// full basis (before the drop) is a partition of unity. Out-of-range x
// is clamped when clamp=true, otherwise a row error.
DesignMatrix bspline_basis(const std::vector<double>& x, const SplineSpec& spec,
                           bool clamp = true);

// Evaluates the full (undropped) basis for one point; test hook for the
// partition-of-unity property.
std::vector<double> bspline_full_row(double x, int degree, const std::vector<double>& knots,
                                     double lo, double hi);

enum class RecipeMode : int { AppendixDesign = 0, Linear = 1 };

// Frozen feature recipe for the multinomial logit. Knots, era levels and
// column order are fixed at build time and serialized with the model, so
// predict-time rows never re-derive data-dependent pieces.
class FeatureRecipe {
 public:
  // Fits the recipe's data-dependent pieces (knots, era levels) on ds.
  static FeatureRecipe build(const PlayDataset& ds, RecipeMode mode = RecipeMode::AppendixDesign,
                             std::vector<std::string> linear_cols = {"yardline_100",
                                                                     "posteam_spread"});

  RecipeMode mode() const { return mode_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  std::size_t n_columns() const { return column_names_.size(); }

  Eigen::VectorXd row(const GameState& g) const;
  DesignMatrix design(const PlayDataset& ds) const;

  nlohmann::json to_json() const;
  static FeatureRecipe from_json(const nlohmann::json& j);

  bool operator==(const FeatureRecipe& other) const;

 private:
  RecipeMode mode_ = RecipeMode::AppendixDesign;
  std::vector<std::string> linear_cols_;
  std::vector<double> yardline_knots_;  // interior knots, frozen
  std::vector<double> clock_knots_;
  std::vector<int> era_levels_;  // sorted; first is the reference
  std::vector<std::string> column_names_;

  void finalize_columns();
};

// Raw numeric covariate by canonical name; shared by recipes and trees.
double state_feature(const GameState& g, const std::string& name);
const std::vector<std::string>& default_model_features();

}  // namespace ep
