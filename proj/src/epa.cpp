#include "ep/epa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ep/csv.hpp"
#include "ep/util.hpp"

namespace ep {

double ep_of_state(const OutcomeModel& model, const GameState& x,
                   std::optional<double> spread_override) {
  GameState g = x;
  if (spread_override) g.posteam_spread = *spread_override;
  return ep_from_probs(model.predict_probs(g));
}

double epa_of_play(const OutcomeModel& model, const PlayRecord& play, const PlayRecord* next,
                   std::optional<double> spread_override) {
  const double start = ep_of_state(model, play.x, spread_override);
  if (next == nullptr) return points_of_outcome(play.outcome_drive) - start;
  if (next->drive_id != play.drive_id)
    throw DataError("epa_of_play: next play belongs to a different drive");
  if (next->play_index_in_drive != play.play_index_in_drive + 1)
    throw DataError("epa_of_play: next play is not the following play in the drive");
  return ep_of_state(model, next->x, spread_override) - start;
}

namespace {

struct QualifyingPlay {
  std::size_t row;
  std::size_t next_row;  // row + 1 when within the drive, npos at drive end
  std::string entity;
  int season;
};
constexpr std::size_t kEndOfDrive = static_cast<std::size_t>(-1);

std::vector<QualifyingPlay> qualifying_plays(const PlayDataset& ds, EpaEntity entity,
                                             std::optional<int> season) {
  std::vector<QualifyingPlay> out;
  for (std::size_t i = 0; i < ds.n_drives(); ++i) {
    const DriveSpan& d = ds.drive(i);
    for (std::size_t r = d.begin; r < d.end; ++r) {
      const PlayRecord& p = ds.play(r);
      if (p.synthetic) throw DataError("epa: dataset contains catalytic augmentation rows");
      if (p.play_type != PlayType::Pass && p.play_type != PlayType::Run) continue;
      if (season && p.season != *season) continue;
      std::string key =
          entity == EpaEntity::Team ? p.posteam_id : p.passer_or_rusher_id;
      if (key.empty()) continue;
      out.push_back({r, r + 1 < d.end ? r + 1 : kEndOfDrive, std::move(key), p.season});
    }
  }
  return out;
}

// Per-play EPA with spread overridden to 0, EP values cached per row.
std::vector<double> epa_values(const PlayDataset& ds, const OutcomeModel& model,
                               const std::vector<QualifyingPlay>& plays) {
  std::vector<char> needed(ds.n_plays(), 0);
  for (const auto& q : plays) {
    needed[q.row] = 1;
    if (q.next_row != kEndOfDrive) needed[q.next_row] = 1;
  }
  std::vector<double> ep_cache(ds.n_plays(), 0.0);
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < ds.n_plays(); ++r)
    if (needed[r]) rows.push_back(r);
  parallel_for(rows.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      ep_cache[rows[i]] = ep_of_state(model, ds.play(rows[i]).x, 0.0);
  });

  std::vector<double> epa(plays.size());
  for (std::size_t i = 0; i < plays.size(); ++i) {
    const auto& q = plays[i];
    const double end_value = q.next_row == kEndOfDrive
                                 ? points_of_outcome(ds.play(q.row).outcome_drive)
                                 : ep_cache[q.next_row];
    epa[i] = end_value - ep_cache[q.row];
  }
  return epa;
}

struct EntityKey {
  std::string id;
  int season;
  bool operator<(const EntityKey& o) const {
    return id != o.id ? id < o.id : season < o.season;
  }
};

}  // namespace

EpaTable aggregate_epa(const PlayDataset& ds, const OutcomeModel& model, EpaEntity entity,
                       std::optional<int> season, long long min_plays) {
  const auto plays = qualifying_plays(ds, entity, season);
  const auto epa = epa_values(ds, model, plays);

  std::map<EntityKey, std::vector<double>> groups;
  for (std::size_t i = 0; i < plays.size(); ++i)
    groups[{plays[i].entity, plays[i].season}].push_back(epa[i]);

  EpaTable table;
  for (const auto& [key, values] : groups) {
    if (static_cast<long long>(values.size()) < min_plays) continue;
    EpaRow row;
    row.entity_id = key.id;
    row.season = key.season;
    row.n_plays = static_cast<long long>(values.size());
    row.epa_per_play = pairwise_sum(values) / static_cast<double>(values.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

EpaTable epa_confidence_intervals(const PlayDataset& ds, const OutcomeModel& full_model,
                                  const BootstrapEnsemble& ens, EpaEntity entity,
                                  std::optional<int> season, long long min_plays, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw ConfigError("epa_confidence_intervals: level must be in (0, 1)");
  EpaTable table = aggregate_epa(ds, full_model, entity, season, min_plays);
  if (table.rows.empty()) return table;

  const auto plays = qualifying_plays(ds, entity, season);
  std::map<EntityKey, std::size_t> slot;
  for (std::size_t e = 0; e < table.rows.size(); ++e)
    slot[{table.rows[e].entity_id, table.rows[e].season}] = e;

  const int B = ens.B();
  // member_means[b][e] = mean EPA of entity e under member b's EP.
  std::vector<std::vector<double>> member_means(B, std::vector<double>(table.rows.size(), 0.0));
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      const auto epa = epa_values(ds, *ens.members[b], plays);
      std::vector<double> sums(table.rows.size(), 0.0);
      std::vector<long long> counts(table.rows.size(), 0);
      for (std::size_t i = 0; i < plays.size(); ++i) {
        const auto it = slot.find({plays[i].entity, plays[i].season});
        if (it == slot.end()) continue;  // entity below min_plays
        sums[it->second] += epa[i];
        ++counts[it->second];
      }
      for (std::size_t e = 0; e < sums.size(); ++e)
        member_means[b][e] = sums[e] / static_cast<double>(counts[e]);
    }
  }, 1);

  // Percentile interval via nearest-rank order statistics.
  const auto rank = [B](double q) {
    const auto r = static_cast<long long>(std::ceil(q * B));
    return static_cast<std::size_t>(std::clamp(r, 1ll, static_cast<long long>(B)) - 1);
  };
  const double q_lo = (1.0 - level) / 2.0;
  const double q_hi = (1.0 + level) / 2.0;
  for (std::size_t e = 0; e < table.rows.size(); ++e) {
    std::vector<double> means(B);
    for (int b = 0; b < B; ++b) means[b] = member_means[b][e];
    std::sort(means.begin(), means.end());
    table.rows[e].ci_lo = means[rank(q_lo)];
    table.rows[e].ci_hi = means[rank(q_hi)];
  }
  return table;
}

void write_epa_csv(const std::string& path, const EpaTable& table) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows)
    rows.push_back({r.entity_id, std::to_string(r.season), std::to_string(r.n_plays),
                    format_double(r.epa_per_play), r.ci_lo ? format_double(*r.ci_lo) : "",
                    r.ci_hi ? format_double(*r.ci_hi) : ""});
  write_csv(path, {"entity_id", "season", "n_plays", "epa_per_play", "ci_lo", "ci_hi"}, rows);
}

void write_epa_plot_csv(const std::string& path, const EpaTable& table) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows)
    rows.push_back({r.entity_id, format_double(r.epa_per_play),
                    format_double(r.ci_lo.value_or(r.epa_per_play)),
                    format_double(r.ci_hi.value_or(r.epa_per_play))});
  write_csv(path, {"entity", "estimate", "lo", "hi"}, rows);
}

nlohmann::json epa_json(const EpaTable& table) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json j{{"entity_id", r.entity_id},
                     {"season", r.season},
                     {"n_plays", r.n_plays},
                     {"epa_per_play", r.epa_per_play}};
    if (r.ci_lo) j["ci_lo"] = *r.ci_lo;
    if (r.ci_hi) j["ci_hi"] = *r.ci_hi;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ep
