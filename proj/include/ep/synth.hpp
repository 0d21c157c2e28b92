#pragma once

#include <array>
#include <cstdint>

#include "ep/config.hpp"
#include "ep/dataset.hpp"

namespace ep {

// Synthetic league with a known outcome law: per-outcome logits linear
// in yardline_100 and posteam_spread, so true probabilities are closed
// form at any state. Drive lengths may be coupled to the outcome to
// manufacture the play-level size bias on purpose.
struct SynthConfig {
  std::size_t n_drives = 1000;
  std::uint64_t seed = 0;
  int season = 2022;

  // beta[k] = {intercept, per-yardline, per-spread}; NoScore row is the
  // natural zero reference but any logits are accepted.
  std::array<std::array<double, 3>, kNumOutcomes> beta = {{
      {1.10, -0.030, -0.080},   // TD: likelier near the endzone, for favorites
      {0.45, -0.020, -0.040},   // FG
      {0.0, 0.0, 0.0},          // NO_SCORE
      {-3.60, 0.012, 0.020},    // OPP_SAFETY: rare, worse pinned deep
      {-2.60, 0.008, 0.050},    // OPP_TD
  }};

  std::vector<double> spread_grid = {-10.0, -7.0, -4.0, -2.0, 0.0, 2.0, 4.0, 7.0, 10.0};

  int min_len = 1;
  int max_len = 5;
  bool outcome_coupled_lengths = false;
  int scoring_min_len = 5;  // touchdown drives when coupled
  int scoring_max_len = 10;
  int nonscoring_min_len = 1;
  int nonscoring_max_len = 3;

  static SynthConfig from_config(const KeyValueConfig& cfg);
};

ProbVector true_probs(const SynthConfig& cfg, const GameState& x);

// Exact marginal outcome distribution over the anchor-state law (uniform
// yardline 1..99 crossed with the spread grid).
ProbVector true_marginal_probs(const SynthConfig& cfg);

PlayDataset generate_league(const SynthConfig& cfg);

}  // namespace ep
