#include "ep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ep/ingest.hpp"
#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

SynthConfig SynthConfig::from_config(const KeyValueConfig& cfg) {
  SynthConfig out;
  out.n_drives = static_cast<std::size_t>(cfg.get_int("synth.n_drives", 1000));
  out.seed = static_cast<std::uint64_t>(cfg.get_int("synth.seed", 0));
  out.season = static_cast<int>(cfg.get_int("synth.season", 2022));
  for (int k = 0; k < kNumOutcomes; ++k) {
    const std::string key = "synth.beta." + outcome_label(static_cast<DriveOutcome>(k));
    if (!cfg.has(key)) continue;
    const auto vals = cfg.get_real_list(key);
    if (vals.size() != 3)
      throw ConfigError(key + ": expected 3 values (intercept, yardline, spread)");
    out.beta[k] = {vals[0], vals[1], vals[2]};
  }
  if (cfg.has("synth.spread_grid")) out.spread_grid = cfg.get_real_list("synth.spread_grid");
  if (out.spread_grid.empty()) throw ConfigError("synth.spread_grid must be non-empty");
  out.min_len = static_cast<int>(cfg.get_int("synth.min_len", out.min_len));
  out.max_len = static_cast<int>(cfg.get_int("synth.max_len", out.max_len));
  out.outcome_coupled_lengths =
      cfg.get_bool("synth.outcome_coupled_lengths", out.outcome_coupled_lengths);
  out.scoring_min_len = static_cast<int>(cfg.get_int("synth.scoring_min_len", out.scoring_min_len));
  out.scoring_max_len = static_cast<int>(cfg.get_int("synth.scoring_max_len", out.scoring_max_len));
  out.nonscoring_min_len =
      static_cast<int>(cfg.get_int("synth.nonscoring_min_len", out.nonscoring_min_len));
  out.nonscoring_max_len =
      static_cast<int>(cfg.get_int("synth.nonscoring_max_len", out.nonscoring_max_len));
  if (out.min_len < 1 || out.max_len < out.min_len)
    throw ConfigError("synth: drive length bounds must satisfy 1 <= min_len <= max_len");
  return out;
}

ProbVector true_probs(const SynthConfig& cfg, const GameState& x) {
  std::array<double, kNumOutcomes> logits{};
  for (int k = 0; k < kNumOutcomes; ++k)
    logits[k] = cfg.beta[k][0] + cfg.beta[k][1] * x.yardline_100 +
                cfg.beta[k][2] * x.posteam_spread;
  return softmax5(logits);
}

ProbVector true_marginal_probs(const SynthConfig& cfg) {
  ProbVector sum;
  std::size_t n = 0;
  GameState g;
  for (int yard = 1; yard <= 99; ++yard) {
    for (double spread : cfg.spread_grid) {
      g.yardline_100 = yard;
      g.posteam_spread = spread;
      const ProbVector p = true_probs(cfg, g);
      for (int k = 0; k < kNumOutcomes; ++k) sum[k] += p[k];
      ++n;
    }
  }
  for (int k = 0; k < kNumOutcomes; ++k) sum[k] /= static_cast<double>(n);
  return sum;
}

PlayDataset generate_league(const SynthConfig& cfg) {
  if (cfg.n_drives < 1) throw ConfigError("synth: n_drives must be >= 1");
  std::vector<PlayRecord> plays;
  plays.reserve(cfg.n_drives * (cfg.max_len + 1) / 2);

  for (std::size_t i = 0; i < cfg.n_drives; ++i) {
    Rng rng(derive(cfg.seed, fnv1a("drive"), i));

    GameState anchor;
    anchor.yardline_100 = static_cast<int>(rng.next_int(1, 99));
    anchor.posteam_spread =
        cfg.spread_grid[static_cast<std::size_t>(rng.next_below(cfg.spread_grid.size()))];
    anchor.half_seconds_remaining = std::floor(rng.next_real(0.0, 1800.0));
    const bool first_half = rng.next_unit() < 0.5;
    anchor.game_seconds_remaining = anchor.half_seconds_remaining + (first_half ? 1800.0 : 0.0);
    anchor.down = 1;
    anchor.ydstogo = 10;
    anchor.era = era_from_season(cfg.season);
    anchor.posteam_timeouts_remaining = static_cast<int>(rng.next_int(0, 3));
    anchor.defteam_timeouts_remaining = static_cast<int>(rng.next_int(0, 3));
    anchor.score_differential = static_cast<int>(rng.next_int(-14, 14));

    const ProbVector p = true_probs(cfg, anchor);
    const DriveOutcome outcome = static_cast<DriveOutcome>(
        [&] {
          const double u = rng.next_unit();
          double cum = 0.0;
          for (int k = 0; k < kNumOutcomes; ++k) {
            cum += p[k];
            if (u < cum) return k;
          }
          return kNumOutcomes - 1;
        }());

    int length;
    if (cfg.outcome_coupled_lengths) {
      length = outcome == DriveOutcome::Touchdown
                   ? static_cast<int>(rng.next_int(cfg.scoring_min_len, cfg.scoring_max_len))
                   : static_cast<int>(rng.next_int(cfg.nonscoring_min_len, cfg.nonscoring_max_len));
    } else {
      length = static_cast<int>(rng.next_int(cfg.min_len, cfg.max_len));
    }

    char drive_id[24];
    std::snprintf(drive_id, sizeof(drive_id), "d%07zu", i);
    char team[8];
    std::snprintf(team, sizeof(team), "T%02d", static_cast<int>(rng.next_int(1, 32)));
    char player[8];
    std::snprintf(player, sizeof(player), "P%03d", static_cast<int>(rng.next_int(1, 64)));

    GameState g = anchor;
    for (int j = 1; j <= length; ++j) {
      PlayRecord rec;
      rec.drive_id = drive_id;
      rec.play_index_in_drive = j;
      rec.x = g;
      rec.posteam_id = team;
      rec.passer_or_rusher_id = player;
      rec.play_type = rng.next_unit() < 0.55 ? PlayType::Pass : PlayType::Run;
      rec.outcome_drive = outcome;
      rec.season = cfg.season;
      plays.push_back(std::move(rec));

      // Field position drifts toward the endzone; clocks run down.
      g.yardline_100 = std::clamp(g.yardline_100 - static_cast<int>(rng.next_int(-3, 12)), 1, 99);
      const double burn = rng.next_real(15.0, 40.0);
      g.half_seconds_remaining = std::max(0.0, g.half_seconds_remaining - burn);
      g.game_seconds_remaining = std::max(0.0, g.game_seconds_remaining - burn);
      g.down = g.down % 4 + 1;
      g.ydstogo = g.down == 1 ? 10 : static_cast<int>(rng.next_int(1, 10));
    }
  }
  return PlayDataset::from_plays(std::move(plays));
}

}  // namespace ep
