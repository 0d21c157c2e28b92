#pragma once

#include <string>
#include <vector>

#include "ep/dataset.hpp"
#include "ep/rng.hpp"

namespace ep::testing {

// Drive of `length` plays sharing one outcome; covariates vary a little
// with the play index so features are not constant.
inline std::vector<PlayRecord> make_drive(const std::string& id, int length, DriveOutcome outcome,
                                          int yardline = 50, double spread = 0.0,
                                          int season = 2022) {
  std::vector<PlayRecord> plays;
  for (int j = 1; j <= length; ++j) {
    PlayRecord p;
    p.drive_id = id;
    p.play_index_in_drive = j;
    p.x.yardline_100 = std::max(1, std::min(99, yardline - 3 * (j - 1)));
    p.x.down = (j - 1) % 4 + 1;
    p.x.ydstogo = 10;
    p.x.half_seconds_remaining = 1200.0 - 25.0 * j;
    p.x.game_seconds_remaining = 3000.0 - 25.0 * j;
    p.x.era = 2;
    p.x.posteam_timeouts_remaining = 3;
    p.x.defteam_timeouts_remaining = 3;
    p.x.score_differential = 0;
    p.x.posteam_spread = spread;
    p.posteam_id = "T01";
    p.passer_or_rusher_id = "P001";
    p.play_type = j % 2 == 0 ? PlayType::Run : PlayType::Pass;
    p.outcome_drive = outcome;
    p.season = season;
    plays.push_back(std::move(p));
  }
  return plays;
}

inline PlayDataset make_dataset(const std::vector<std::vector<PlayRecord>>& drives) {
  std::vector<PlayRecord> all;
  for (const auto& d : drives) all.insert(all.end(), d.begin(), d.end());
  return PlayDataset::from_plays(std::move(all));
}

// Random mixed-outcome dataset for solver and metric tests.
inline PlayDataset random_dataset(std::size_t n_drives, std::uint64_t seed, int max_len = 4) {
  Rng rng(seed);
  std::vector<std::vector<PlayRecord>> drives;
  for (std::size_t i = 0; i < n_drives; ++i) {
    const auto outcome = static_cast<DriveOutcome>(rng.next_below(kNumOutcomes));
    const int len = static_cast<int>(rng.next_int(1, max_len));
    const int yard = static_cast<int>(rng.next_int(1, 99));
    const double spread = rng.next_real(-10.0, 10.0);
    drives.push_back(make_drive("d" + std::to_string(i), len, outcome, yard, spread));
  }
  return make_dataset(drives);
}

inline ProbVector normalized(std::array<double, kNumOutcomes> raw) {
  double sum = 0.0;
  for (double v : raw) sum += v;
  ProbVector p;
  for (int k = 0; k < kNumOutcomes; ++k) p[k] = raw[k] / sum;
  return p;
}

}  // namespace ep::testing
