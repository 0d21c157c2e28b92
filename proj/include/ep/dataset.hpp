#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ep/domain.hpp"

namespace ep {

enum class PlayType : int { Pass = 0, Run = 1, Other = 2 };

const std::string& play_type_label(PlayType t);
PlayType play_type_from_label(const std::string& label);

// Game-state covariates; the input vector every outcome model consumes.
struct GameState {
  int yardline_100 = 50;  // yards from the opponent endzone, 1..99
  int down = 1;           // 1..4
  int ydstogo = 10;       // >= 1
  double half_seconds_remaining = 1800.0;
  double game_seconds_remaining = 3600.0;
  int era = 0;
  int posteam_timeouts_remaining = 3;  // 0..3
  int defteam_timeouts_remaining = 3;  // 0..3
  int score_differential = 0;          // possessing team minus opponent
  double posteam_spread = 0.0;         // pre-game spread relative to possession

  bool operator==(const GameState&) const = default;
};

struct PlayRecord {
  std::string drive_id;
  int play_index_in_drive = 1;  // contiguous from 1 within a drive
  GameState x;
  std::string posteam_id;
  std::string passer_or_rusher_id;  // empty when unknown
  PlayType play_type = PlayType::Other;
  DriveOutcome outcome_drive = DriveOutcome::NoScore;
  int season = 0;
  bool synthetic = false;  // catalytic augmentation rows; never scored

  bool operator==(const PlayRecord&) const = default;
};

enum class WeightScheme : int { Unit = 0, InverseDriveLength = 1 };

const std::string& weight_scheme_label(WeightScheme s);
WeightScheme weight_scheme_from_label(const std::string& label);

struct DriveSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open row range
  std::size_t size() const { return end - begin; }
};

// Ordered plays grouped into contiguous drives, plus per-play weights.
// Immutable after construction; operations return new datasets.
class PlayDataset {
 public:
  PlayDataset() = default;

  // Validates drive contiguity, shared outcomes, and index invariants.
  static PlayDataset from_plays(std::vector<PlayRecord> plays);

  std::size_t n_plays() const { return plays_.size(); }
  std::size_t n_drives() const { return drives_.size(); }

  const std::vector<PlayRecord>& plays() const { return plays_; }
  const PlayRecord& play(std::size_t row) const { return plays_[row]; }

  const std::vector<DriveSpan>& drives() const { return drives_; }
  const DriveSpan& drive(std::size_t i) const { return drives_[i]; }
  const std::string& drive_id(std::size_t i) const { return plays_[drives_[i].begin].drive_id; }
  DriveOutcome drive_outcome(std::size_t i) const {
    return plays_[drives_[i].begin].outcome_drive;
  }

  // Drive index for a row (rows within one drive share it).
  std::size_t drive_of_row(std::size_t row) const { return drive_of_row_[row]; }

  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t row) const { return weights_[row]; }
  double total_weight() const;
  WeightScheme scheme() const { return scheme_; }

  // Returns a copy with weights assigned per the scheme (1 or 1/N_i).
  // Idempotent: reapplying a scheme reproduces identical weights.
  PlayDataset with_weights(WeightScheme scheme) const;

  // Copy with explicit per-play weights (catalytic augmentation path).
  PlayDataset with_raw_weights(std::vector<double> weights) const;

  // Keeps the drives whose ordinal passes the predicate, preserving order.
  PlayDataset select_drives(const std::vector<std::size_t>& drive_ordinals) const;

  bool operator==(const PlayDataset& other) const {
    return plays_ == other.plays_ && weights_ == other.weights_;
  }

 private:
  std::vector<PlayRecord> plays_;
  std::vector<DriveSpan> drives_;
  std::vector<std::size_t> drive_of_row_;
  std::vector<double> weights_;
  WeightScheme scheme_ = WeightScheme::Unit;
};

// Assigns weights per scheme (free-function form of with_weights).
PlayDataset compute_play_weights(const PlayDataset& ds, WeightScheme scheme);

// Stable content hash over plays and weights, for run manifests.
std::string dataset_fingerprint(const PlayDataset& ds);

// Drive-preserving random split; the test side gets floor(fraction * N)
// drives. Deterministic given seed. Throws DataError on < 2 drives.
struct TrainTestSplit {
  PlayDataset train;
  PlayDataset test;
};
TrainTestSplit split_by_drives(const PlayDataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace ep
