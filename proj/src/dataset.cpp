#include "ep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

namespace {
const std::array<std::string, 3> kPlayTypeLabels = {"pass", "run", "other"};
const std::array<std::string, 2> kSchemeLabels = {"unit", "inverse_drive_length"};
}  // namespace

const std::string& play_type_label(PlayType t) { return kPlayTypeLabels[static_cast<int>(t)]; }

PlayType play_type_from_label(const std::string& label) {
  for (int i = 0; i < 3; ++i)
    if (kPlayTypeLabels[i] == label) return static_cast<PlayType>(i);
  throw DataError("unknown play_type: \"" + label + "\"");
}

const std::string& weight_scheme_label(WeightScheme s) {
  return kSchemeLabels[static_cast<int>(s)];
}

WeightScheme weight_scheme_from_label(const std::string& label) {
  for (int i = 0; i < 2; ++i)
    if (kSchemeLabels[i] == label) return static_cast<WeightScheme>(i);
  throw ConfigError("unknown weight scheme: \"" + label + "\"");
}

PlayDataset PlayDataset::from_plays(std::vector<PlayRecord> plays) {
  PlayDataset ds;
  ds.plays_ = std::move(plays);
  ds.drive_of_row_.resize(ds.plays_.size());

  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (row < ds.plays_.size()) {
    const std::string& id = ds.plays_[row].drive_id;
    if (id.empty()) throw DataError("empty drive_id at row " + std::to_string(row));
    if (!seen.insert(id).second)
      throw DataError("drive \"" + id + "\" is not contiguous in the input");
    DriveSpan span{row, row};
    const DriveOutcome outcome = ds.plays_[row].outcome_drive;
    while (span.end < ds.plays_.size() && ds.plays_[span.end].drive_id == id) {
      const PlayRecord& p = ds.plays_[span.end];
      if (p.outcome_drive != outcome)
        throw DataError("drive \"" + id + "\" has inconsistent outcomes");
      const int expected = static_cast<int>(span.end - span.begin) + 1;
      if (p.play_index_in_drive != expected)
        throw DataError("drive \"" + id + "\" play indices not contiguous from 1 (row " +
                        std::to_string(span.end) + ")");
      ds.drive_of_row_[span.end] = ds.drives_.size();
      ++span.end;
    }
    ds.drives_.push_back(span);
    row = span.end;
  }
  ds.weights_.assign(ds.plays_.size(), 1.0);
  ds.scheme_ = WeightScheme::Unit;
  return ds;
}

double PlayDataset::total_weight() const { return pairwise_sum(weights_); }

PlayDataset PlayDataset::with_weights(WeightScheme scheme) const {
  PlayDataset out = *this;
  out.scheme_ = scheme;
  if (scheme == WeightScheme::Unit) {
    out.weights_.assign(plays_.size(), 1.0);
    return out;
  }
  for (const DriveSpan& d : drives_) {
    const double w = 1.0 / static_cast<double>(d.size());
    for (std::size_t r = d.begin; r < d.end; ++r) out.weights_[r] = w;
  }
  return out;
}

PlayDataset PlayDataset::with_raw_weights(std::vector<double> weights) const {
  if (weights.size() != plays_.size())
    throw ConfigError("with_raw_weights: weight vector length mismatch");
  for (double w : weights)
    if (!(w >= 0.0) || std::isnan(w)) throw ConfigError("with_raw_weights: weights must be >= 0");
  PlayDataset out = *this;
  out.weights_ = std::move(weights);
  return out;
}

PlayDataset PlayDataset::select_drives(const std::vector<std::size_t>& drive_ordinals) const {
  std::vector<PlayRecord> rows;
  std::vector<double> w;
  for (std::size_t i : drive_ordinals) {
    const DriveSpan& d = drives_.at(i);
    for (std::size_t r = d.begin; r < d.end; ++r) {
      rows.push_back(plays_[r]);
      w.push_back(weights_[r]);
    }
  }
  PlayDataset out = from_plays(std::move(rows));
  out.weights_ = std::move(w);
  out.scheme_ = scheme_;
  return out;
}

PlayDataset compute_play_weights(const PlayDataset& ds, WeightScheme scheme) {
  return ds.with_weights(scheme);
}

std::string dataset_fingerprint(const PlayDataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix_str = [&h](const std::string& s) { h = fnv1a(s.data(), s.size(), h); };
  auto mix_raw = [&h](const void* p, std::size_t n) { h = fnv1a(p, n, h); };
  for (std::size_t i = 0; i < ds.n_plays(); ++i) {
    const PlayRecord& p = ds.play(i);
    mix_str(p.drive_id);
    mix_str(p.posteam_id);
    mix_str(p.passer_or_rusher_id);
    const int ints[10] = {p.x.yardline_100,
                          p.x.down,
                          p.x.ydstogo,
                          p.x.era,
                          p.x.posteam_timeouts_remaining,
                          p.x.defteam_timeouts_remaining,
                          p.x.score_differential,
                          p.play_index_in_drive,
                          static_cast<int>(p.play_type),
                          static_cast<int>(p.outcome_drive)};
    mix_raw(ints, sizeof(ints));
    const double reals[4] = {p.x.half_seconds_remaining, p.x.game_seconds_remaining,
                             p.x.posteam_spread, ds.weight(i)};
    mix_raw(reals, sizeof(reals));
    const int season = p.season;
    mix_raw(&season, sizeof(season));
  }
  return to_hex(h);
}

TrainTestSplit split_by_drives(const PlayDataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("split_by_drives: test_fraction must be in (0, 1)");
  if (ds.n_drives() < 2) throw DataError("split_by_drives: need at least 2 drives");

  std::vector<std::size_t> order(ds.n_drives());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive(seed, fnv1a("split_by_drives")));
  rng.shuffle(order);

  const auto n_test = static_cast<std::size_t>(
      std::floor(test_fraction * static_cast<double>(ds.n_drives())));
  std::vector<bool> in_test(ds.n_drives(), false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  std::vector<std::size_t> test_ids, train_ids;
  for (std::size_t i = 0; i < ds.n_drives(); ++i)
    (in_test[i] ? test_ids : train_ids).push_back(i);

  return TrainTestSplit{ds.select_drives(train_ids), ds.select_drives(test_ids)};
}

}  // namespace ep
