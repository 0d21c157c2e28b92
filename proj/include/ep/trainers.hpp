#pragma once

#include <cstdint>
#include <functional>

#include "ep/model.hpp"

namespace ep {

// A fitter consumes the dataset's weights as given; the strategy
// functions below own weight-scheme decisions.
using FitFn = std::function<ModelPtr(const PlayDataset& ds, std::uint64_t seed)>;

FitFn make_mlr_fitter(RecipeMode mode = RecipeMode::AppendixDesign, MlrFitOptions opt = {},
                      std::vector<std::string> linear_cols = {"yardline_100", "posteam_spread"});
FitFn make_gbdt_fitter(GbdtParams params, std::vector<std::string> features = {});

// Unit weights, then delegate.
ModelPtr fit_unweighted(const PlayDataset& train, const FitFn& fitter, std::uint64_t seed);

// Inverse-drive-length weights (w_ij = 1/N_i), then delegate.
ModelPtr fit_weighted(const PlayDataset& train, const FitFn& fitter, std::uint64_t seed);

// One play drawn uniformly per drive, M times; members fit with unit
// weights; predictions averaged.
ModelPtr fit_averaged_subsample(const PlayDataset& train, int M, const FitFn& fitter,
                                std::uint64_t seed);

// Test hook: the m-th one-play-per-drive training subsample.
PlayDataset draw_training_subsample(const PlayDataset& train, std::uint64_t seed, int m);

struct CatalyticConfig {
  long long M_synth = 20000;  // target synthetic row count (whole drives, so may overshoot)
  double phi = 1.0;           // synthetic total weight as a fraction of observed
  FitFn prior_fitter;
  FitFn target_fitter;
  std::uint64_t seed = 0;
  // When true, one outcome is drawn per synthetic drive (at its first
  // play's state) instead of independently per play.
  bool drive_shared_outcomes = false;
};

// Synthetic-augmentation step: resamples whole drives from train until
// at least M_synth covariate rows exist, imputes outcomes from the
// prior, and attaches per-row weight phi * W / nrow(synthetic) where W
// is the total observed weight. With per-play outcome draws each
// synthetic row becomes its own single-play drive so that the shared-
// outcome dataset invariant keeps holding. phi = 0 returns train as is.
PlayDataset catalytic_augment(const PlayDataset& train, const OutcomeModel& prior,
                              long long M_synth, double phi, std::uint64_t seed,
                              bool drive_shared_outcomes = false);

// Full catalytic procedure: fit prior on train, augment, fit target on
// the combined weighted dataset, return the fitted target.
ModelPtr catalytic_fit(const PlayDataset& train, const CatalyticConfig& cfg);

}  // namespace ep
