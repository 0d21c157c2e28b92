#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ep/dataset.hpp"
#include "ep/features.hpp"

#include <json.hpp>

namespace ep {

enum class GbdtObjective : int { MulticlassSoftmax = 0, SquaredError = 1 };

struct GbdtParams {
  int num_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double min_child_weight = 1e-3;  // minimum hessian mass per child
  double row_subsample = 1.0;      // per-round, without replacement
  double col_subsample = 1.0;      // per-tree
  double l2_leaf_penalty = 1.0;
  // feature name -> -1 (decreasing), +1 (increasing). Squared-error only:
  // class probabilities are not monotone in any covariate.
  std::map<std::string, int> monotone_constraints;
  GbdtObjective objective = GbdtObjective::MulticlassSoftmax;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static GbdtParams from_json(const nlohmann::json& j);
  bool operator==(const GbdtParams&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf value, learning rate already applied
  double gain = 0.0;   // split gain, kept for diagnostics and tests
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  double predict(const std::vector<double>& x) const;
};

class GbdtModel {
 public:
  GbdtModel() = default;
  GbdtModel(GbdtParams params, std::vector<std::string> feature_names,
            std::vector<double> base_scores, std::vector<std::vector<Tree>> rounds)
      : params_(std::move(params)),
        feature_names_(std::move(feature_names)),
        base_scores_(std::move(base_scores)),
        rounds_(std::move(rounds)) {}

  ProbVector predict_probs(const GameState& g) const;
  double predict_value(const GameState& g) const;
  ProbVector predict_probs_features(const std::vector<double>& x) const;
  double predict_value_features(const std::vector<double>& x) const;

  const GbdtParams& params() const { return params_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<double>& base_scores() const { return base_scores_; }
  const std::vector<std::vector<Tree>>& rounds() const { return rounds_; }

  nlohmann::json to_json() const;
  static GbdtModel from_json(const nlohmann::json& j);

 private:
  std::vector<double> extract(const GameState& g) const;

  GbdtParams params_;
  std::vector<std::string> feature_names_;
  std::vector<double> base_scores_;  // per class, or a single mean
  std::vector<std::vector<Tree>> rounds_;
};

// Boosted multiclass / regression fit with per-row weights multiplying
// every gradient and hessian contribution. Zero-weight rows are dropped
// up front so they cannot influence split thresholds.
GbdtModel fit_gbdt(const PlayDataset& ds, const std::vector<std::string>& features,
                   const GbdtParams& params);

// Same fit, additionally reporting unweighted validation logloss on
// `watch` after each round in `checkpoints` (multiclass only).
GbdtModel fit_gbdt_watched(const PlayDataset& ds, const std::vector<std::string>& features,
                           const GbdtParams& params, const PlayDataset& watch,
                           const std::vector<int>& checkpoints,
                           std::vector<double>* checkpoint_logloss);

// Squared-error fit of pts(outcome) with the monotone-constraint set
// over game-state covariates: decreasing in yardline_100, ydstogo,
// posteam_spread, defteam_timeouts_remaining; increasing in
// posteam_timeouts_remaining. params.monotone_constraints, when
// non-empty, overrides that default.
GbdtModel fit_gbdt_regression_monotone(const PlayDataset& ds, GbdtParams params);

// Weighted training logloss (multiclass) after every round; test hook
// for the descent property.
std::vector<double> gbdt_training_logloss_curve(const PlayDataset& ds,
                                                const std::vector<std::string>& features,
                                                const GbdtParams& params);

struct TuneResult {
  GbdtParams best;
  // (params, validation logloss), one row per grid entry in grid order.
  std::vector<std::pair<GbdtParams, double>> table;
};

// 50/50 drive-preserving split of `train`; each grid point is fit on one
// half and scored by unweighted play-level logloss on the other. Grid
// entries differing only in num_rounds share one fit via checkpoints.
TuneResult tune_grid(const PlayDataset& train, const std::vector<GbdtParams>& grid,
                     std::uint64_t seed);

std::vector<GbdtParams> default_tuning_grid(const GbdtParams& base = {});

}  // namespace ep
