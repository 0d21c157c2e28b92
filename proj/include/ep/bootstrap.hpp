#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ep/model.hpp"
#include "ep/trainers.hpp"

namespace ep {

enum class BootstrapScheme : int { IidPlays = 0, ClusterDrives = 1 };

const std::string& bootstrap_scheme_label(BootstrapScheme s);
BootstrapScheme bootstrap_scheme_from_label(const std::string& label);

// Resamples plays (rows) uniformly with replacement; each drawn play
// becomes its own single-play drive whose id records the source drive.
// Weights are reset to unit; trainers reapply their scheme.
PlayDataset resample_iid(const PlayDataset& ds, std::uint64_t seed);

// Resamples drives (clusters) uniformly with replacement; drawn drives
// keep their plays whole under a fresh unique drive id per draw.
PlayDataset resample_cluster(const PlayDataset& ds, std::uint64_t seed);

struct BootstrapEnsemble {
  std::vector<ModelPtr> members;
  BootstrapScheme scheme = BootstrapScheme::ClusterDrives;
  std::uint64_t seed = 0;
  std::string data_hash;  // fingerprint of the training dataset

  int B() const { return static_cast<int>(members.size()); }

  void save(const std::string& dir) const;
  static BootstrapEnsemble load(const std::string& dir);
};

// Member b trains on the b-th resample with RNG stream (seed, b). The
// trainer applies its own weighting scheme to the resampled data.
BootstrapEnsemble fit_bootstrap_ensemble(const PlayDataset& train, int B, BootstrapScheme scheme,
                                         const FitFn& trainer, std::uint64_t seed);

// Smallest outcome set whose estimated mass reaches alpha; outcomes
// ranked by descending probability, ties by canonical order.
struct PredictionSet {
  std::vector<DriveOutcome> outcomes;  // in selection order
  double alpha = 0.95;

  bool contains(DriveOutcome o) const;
  std::size_t size() const { return outcomes.size(); }
};

PredictionSet prediction_set_single(const ProbVector& p, double alpha);

// Category draw from p at uniform u in [0, 1).
int draw_from_probs(const ProbVector& p, double u);

// One outcome drawn per member via counter-based uniforms; the set is
// built from the empirical distribution of the B draws.
PredictionSet prediction_set_boot(const BootstrapEnsemble& ens, const GameState& x, double alpha,
                                  std::uint64_t seed);
PredictionSet prediction_set_from_draws(const std::vector<int>& drawn_outcomes, double alpha);

}  // namespace ep
