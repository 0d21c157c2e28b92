#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ep/bootstrap.hpp"
#include "ep/model.hpp"

#include <json.hpp>

namespace ep {

// EP of a game-state, optionally with the point spread replaced (0 for
// context-neutral estimates).
double ep_of_state(const OutcomeModel& model, const GameState& x,
                   std::optional<double> spread_override = std::nullopt);

// End-of-play EP minus start-of-play EP; a drive-ending play takes the
// realized drive points as its end value, so per-drive EPA telescopes to
// pts(outcome) - EP(first state).
double epa_of_play(const OutcomeModel& model, const PlayRecord& play, const PlayRecord* next,
                   std::optional<double> spread_override = std::nullopt);

enum class EpaEntity : int { Team = 0, PasserOrRusher = 1 };

struct EpaRow {
  std::string entity_id;
  int season = 0;
  long long n_plays = 0;
  double epa_per_play = 0.0;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
};

struct EpaTable {
  std::vector<EpaRow> rows;
};

// Mean EPA per play over qualifying plays (pass/run) per entity-season,
// spread overridden to 0; entities under min_plays are dropped.
EpaTable aggregate_epa(const PlayDataset& ds, const OutcomeModel& model, EpaEntity entity,
                       std::optional<int> season, long long min_plays);

// Adds percentile (nearest-rank) confidence intervals over per-member
// mean EPA; point estimates come from the full-data model.
EpaTable epa_confidence_intervals(const PlayDataset& ds, const OutcomeModel& full_model,
                                  const BootstrapEnsemble& ens, EpaEntity entity,
                                  std::optional<int> season, long long min_plays, double level);

void write_epa_csv(const std::string& path, const EpaTable& table);
// Long format for plotting: entity, estimate, lo, hi.
void write_epa_plot_csv(const std::string& path, const EpaTable& table);
nlohmann::json epa_json(const EpaTable& table);

}  // namespace ep
