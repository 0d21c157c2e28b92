#include "ep/trainers.hpp"

#include <cmath>

#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

FitFn make_mlr_fitter(RecipeMode mode, MlrFitOptions opt, std::vector<std::string> linear_cols) {
  return [mode, opt, linear_cols](const PlayDataset& ds, std::uint64_t) -> ModelPtr {
    return std::make_shared<MlrOutcomeModel>(
        fit_weighted_multinomial_logit(ds, mode, opt, linear_cols));
  };
}

FitFn make_gbdt_fitter(GbdtParams params, std::vector<std::string> features) {
  if (features.empty()) features = default_model_features();
  return [params, features](const PlayDataset& ds, std::uint64_t seed) -> ModelPtr {
    GbdtParams p = params;
    p.seed = derive(params.seed, seed);
    return std::make_shared<GbdtOutcomeModel>(fit_gbdt(ds, features, p));
  };
}

ModelPtr fit_unweighted(const PlayDataset& train, const FitFn& fitter, std::uint64_t seed) {
  return fitter(train.with_weights(WeightScheme::Unit), seed);
}

ModelPtr fit_weighted(const PlayDataset& train, const FitFn& fitter, std::uint64_t seed) {
  return fitter(train.with_weights(WeightScheme::InverseDriveLength), seed);
}

PlayDataset draw_training_subsample(const PlayDataset& train, std::uint64_t seed, int m) {
  std::vector<PlayRecord> rows;
  rows.reserve(train.n_drives());
  const std::uint64_t stream = derive(seed, fnv1a("avgsub"), static_cast<std::uint64_t>(m));
  for (std::size_t i = 0; i < train.n_drives(); ++i) {
    const DriveSpan& d = train.drive(i);
    const double u = unit_uniform(stream, i);
    const auto pick = std::min(d.size() - 1, static_cast<std::size_t>(u * d.size()));
    PlayRecord p = train.play(d.begin + pick);
    p.play_index_in_drive = 1;
    rows.push_back(std::move(p));
  }
  return PlayDataset::from_plays(std::move(rows)).with_weights(WeightScheme::Unit);
}

ModelPtr fit_averaged_subsample(const PlayDataset& train, int M, const FitFn& fitter,
                                std::uint64_t seed) {
  if (M < 1) throw ConfigError("fit_averaged_subsample: M must be >= 1");
  if (train.n_drives() == 0) throw DataError("fit_averaged_subsample: empty dataset");
  std::vector<ModelPtr> members;
  members.reserve(M);
  for (int m = 0; m < M; ++m) {
    try {
      members.push_back(fitter(draw_training_subsample(train, seed, m), derive(seed, m)));
    } catch (const std::exception& e) {
      throw NumericError("fit_averaged_subsample: member " + std::to_string(m) +
                         " failed: " + e.what());
    }
  }
  return std::make_shared<AveragedSubsampleModel>(std::move(members));
}

PlayDataset catalytic_augment(const PlayDataset& train, const OutcomeModel& prior,
                              long long M_synth, double phi, std::uint64_t seed,
                              bool drive_shared_outcomes) {
  if (phi < 0.0) throw ConfigError("catalytic: phi must be >= 0");
  if (M_synth < 1) throw ConfigError("catalytic: M_synth must be >= 1");
  if (train.n_plays() == 0) throw DataError("catalytic: empty training dataset");
  if (phi == 0.0) return train;  // zero-weight rows are inert

  // Step 3: resample whole drives until the synthetic row count reaches
  // M_synth (the final count may overshoot by up to the longest drive).
  std::vector<PlayRecord> synth;
  Rng drive_rng(derive(seed, fnv1a("catalytic_drives")));
  std::size_t n_synth_drives = 0;
  while (static_cast<long long>(synth.size()) < M_synth) {
    const auto pick = static_cast<std::size_t>(drive_rng.next_below(train.n_drives()));
    const DriveSpan& d = train.drive(pick);
    const std::string new_id = "synth" + std::to_string(n_synth_drives++) + ":" +
                               train.drive_id(pick);
    for (std::size_t r = d.begin; r < d.end; ++r) {
      PlayRecord p = train.play(r);
      p.drive_id = new_id;
      p.synthetic = true;
      synth.push_back(std::move(p));
    }
  }

  // Step 4: impute outcomes from the prior. Per-play draws make each
  // synthetic row its own drive; the shared variant draws once per
  // resampled drive at its first play's state.
  const std::uint64_t draw_stream = derive(seed, fnv1a("catalytic_outcomes"));
  auto draw_outcome = [&](const GameState& x, std::uint64_t tag) {
    const ProbVector p = prior.predict_probs(x);
    const double u = unit_uniform(draw_stream, tag);
    double cum = 0.0;
    for (int k = 0; k < kNumOutcomes; ++k) {
      cum += p[k];
      if (u < cum) return static_cast<DriveOutcome>(k);
    }
    return DriveOutcome::OppTouchdown;
  };
  if (drive_shared_outcomes) {
    std::size_t i = 0;
    std::uint64_t drive_tag = 0;
    while (i < synth.size()) {
      const std::string& id = synth[i].drive_id;
      const DriveOutcome y = draw_outcome(synth[i].x, drive_tag++);
      for (; i < synth.size() && synth[i].drive_id == id; ++i) synth[i].outcome_drive = y;
    }
  } else {
    for (std::size_t i = 0; i < synth.size(); ++i) {
      synth[i].outcome_drive = draw_outcome(synth[i].x, i);
      synth[i].drive_id = "synth_row" + std::to_string(i);
      synth[i].play_index_in_drive = 1;
    }
  }

  // Step 5: each synthetic row carries weight phi * W / nrow(synthetic).
  const double W = train.total_weight();
  const double w_synth = phi * W / static_cast<double>(synth.size());

  // Step 6: concatenate.
  std::vector<PlayRecord> combined = train.plays();
  combined.insert(combined.end(), synth.begin(), synth.end());
  std::vector<double> weights = train.weights();
  weights.insert(weights.end(), synth.size(), w_synth);
  return PlayDataset::from_plays(std::move(combined)).with_raw_weights(std::move(weights));
}

ModelPtr catalytic_fit(const PlayDataset& train, const CatalyticConfig& cfg) {
  if (!cfg.prior_fitter || !cfg.target_fitter)
    throw ConfigError("catalytic: prior and target fitters are required");
  if (train.n_plays() == 0) throw DataError("catalytic: empty training dataset");
  const ModelPtr prior = cfg.prior_fitter(train, derive(cfg.seed, fnv1a("prior")));
  const PlayDataset combined = catalytic_augment(train, *prior, cfg.M_synth, cfg.phi, cfg.seed,
                                                 cfg.drive_shared_outcomes);
  // Target sees the undived seed so that phi = 0 reproduces a plain fit
  // of the observed data bit for bit.
  return cfg.target_fitter(combined, cfg.seed);
}

}  // namespace ep
