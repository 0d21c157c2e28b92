#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ep/config.hpp"
#include "ep/model.hpp"

namespace ep::cli {

// Trainer description assembled from the run config; see README for the
// key schema.
struct TrainerSpec {
  std::string model = "mlr";  // mlr | gbdt | gbdt_regression_monotone
  WeightScheme scheme = WeightScheme::InverseDriveLength;
  std::string strategy = "plain";  // plain | averaged_subsample | catalytic
  int M = 100;

  RecipeMode recipe = RecipeMode::AppendixDesign;
  std::vector<std::string> linear_cols = {"yardline_100", "posteam_spread"};
  MlrFitOptions mlr_opt;

  GbdtParams gbdt;
  std::vector<std::string> gbdt_features;

  long long cat_M_synth = 20000;
  double cat_phi = 1.0;
  bool cat_drive_shared = false;
  RecipeMode prior_recipe = RecipeMode::AppendixDesign;
  std::vector<std::string> prior_linear_cols = {"yardline_100", "posteam_spread"};
  MlrFitOptions prior_opt;
};

TrainerSpec trainer_from_config(const KeyValueConfig& cfg);

// Fits a probability model per the spec (plain / averaged-subsample /
// catalytic strategies). gbdt_regression_monotone is handled by the
// train subcommand directly, not here.
ModelPtr fit_with_spec(const PlayDataset& train, const TrainerSpec& spec, std::uint64_t seed);

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace ep::cli
