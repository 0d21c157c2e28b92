#include "ep/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ep/csv.hpp"
#include "ep/util.hpp"

namespace ep {

namespace {

const std::vector<std::string> kCanonicalColumns = {
    "drive_id",
    "play_index_in_drive",
    "yardline_100",
    "down",
    "ydstogo",
    "half_seconds_remaining",
    "game_seconds_remaining",
    "era",
    "posteam_timeouts_remaining",
    "defteam_timeouts_remaining",
    "score_differential",
    "posteam_spread",
    "posteam_id",
    "passer_or_rusher_id",
    "play_type",
    "outcome_drive",
    "season",
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool contains_word(const std::string& haystack, const std::string& word) {
  std::istringstream ss(haystack);
  std::string tok;
  while (ss >> tok) {
    tok.erase(std::remove_if(tok.begin(), tok.end(),
                             [](unsigned char c) { return !std::isalnum(c); }),
              tok.end());
    if (tok == word) return true;
  }
  return false;
}

long long parse_int_field(const std::string& s, const std::string& col, std::size_t line) {
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw DataError("line " + std::to_string(line) + ": column \"" + col +
                    "\": expected integer, got \"" + s + "\"");
  return v;
}

double parse_real_field(const std::string& s, const std::string& col, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw DataError("line " + std::to_string(line) + ": column \"" + col +
                    "\": expected real, got \"" + s + "\"");
  return v;
}

void check_range_int(long long v, long long lo, long long hi, const std::string& col,
                     std::size_t line) {
  if (v < lo || v > hi)
    throw DataError("line " + std::to_string(line) + ": column \"" + col + "\": value " +
                    std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
}

}  // namespace

const std::vector<std::string>& canonical_columns() { return kCanonicalColumns; }

IngestConfig IngestConfig::from_config(const KeyValueConfig& cfg) {
  IngestConfig out;
  out.column_renames = cfg.with_prefix("rename.");
  for (const std::string& t : cfg.get_list("exclude_play_types"))
    out.exclude_play_types.push_back(play_type_from_label(t));
  const std::string era = cfg.get_string("era.mode", "auto");
  if (era == "auto") out.era_mode = EraMode::Auto;
  else if (era == "column") out.era_mode = EraMode::Column;
  else if (era == "season_bins") out.era_mode = EraMode::SeasonBins;
  else throw ConfigError("era.mode must be auto|column|season_bins, got \"" + era + "\"");
  out.drop_empty_drives = cfg.get_bool("drop_empty_drives", true);
  return out;
}

int era_from_season(int season) {
  if (season <= 2013) return 0;
  if (season <= 2017) return 1;
  return 2;
}

DriveOutcome map_drive_result(const std::string& raw_result, int raw_points) {
  const std::string t = lower(raw_result);
  if (t.find("touchdown") != std::string::npos || contains_word(t, "td")) {
    const bool opponent = raw_points < 0 || t.find("opp") != std::string::npos ||
                          t.find("return") != std::string::npos;
    return opponent ? DriveOutcome::OppTouchdown : DriveOutcome::Touchdown;
  }
  if (t.find("field goal") != std::string::npos || contains_word(t, "fg")) {
    if (t.find("miss") != std::string::npos || t.find("block") != std::string::npos)
      return DriveOutcome::NoScore;
    return DriveOutcome::FieldGoal;
  }
  if (t.find("safety") != std::string::npos) return DriveOutcome::OppSafety;

  static const std::vector<std::string> no_score = {
      "punt",     "turnover", "interception", "fumble", "downs",
      "end of half", "end of game", "touchback", "kneel", "no score"};
  for (const std::string& tok : no_score)
    if (t.find(tok) != std::string::npos) return DriveOutcome::NoScore;

  throw DataError("unknown drive result token: \"" + raw_result + "\"");
}

namespace {

struct ColumnMap {
  std::size_t drive_id, play_index, yardline, down, ydstogo, half_seconds, game_seconds;
  std::size_t pos_to, def_to, score_diff, spread, posteam, play_type, outcome, season;
  std::optional<std::size_t> era, player, drive_points;
};

ColumnMap resolve_columns(const CsvTable& table, const IngestConfig& cfg) {
  auto source_name = [&cfg](const std::string& canonical) {
    auto it = cfg.column_renames.find(canonical);
    return it == cfg.column_renames.end() ? canonical : it->second;
  };
  auto require = [&](const std::string& canonical) {
    auto idx = table.column(source_name(canonical));
    if (!idx)
      throw DataError("missing required column: \"" + source_name(canonical) + "\"");
    return *idx;
  };
  auto optional_col = [&](const std::string& canonical) {
    return table.column(source_name(canonical));
  };

  ColumnMap m{};
  m.drive_id = require("drive_id");
  m.play_index = require("play_index_in_drive");
  m.yardline = require("yardline_100");
  m.down = require("down");
  m.ydstogo = require("ydstogo");
  m.half_seconds = require("half_seconds_remaining");
  m.game_seconds = require("game_seconds_remaining");
  m.pos_to = require("posteam_timeouts_remaining");
  m.def_to = require("defteam_timeouts_remaining");
  m.score_diff = require("score_differential");
  m.spread = require("posteam_spread");
  m.posteam = require("posteam_id");
  m.play_type = require("play_type");
  m.outcome = require("outcome_drive");
  m.season = require("season");
  m.era = optional_col("era");
  m.player = optional_col("passer_or_rusher_id");
  m.drive_points = optional_col("drive_points");
  if (cfg.era_mode == IngestConfig::EraMode::Column && !m.era)
    throw DataError("era.mode=column but column \"" + source_name("era") + "\" is missing");
  return m;
}

}  // namespace

PlayDataset parse_play_csv_text(const std::string& text, const IngestConfig& cfg) {
  const CsvTable table = parse_csv_text(text);
  const ColumnMap cols = resolve_columns(table, cfg);
  const bool use_era_column = cols.era && cfg.era_mode != IngestConfig::EraMode::SeasonBins;

  std::vector<PlayRecord> plays;
  plays.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    PlayRecord p;
    p.drive_id = row[cols.drive_id];
    p.play_index_in_drive =
        static_cast<int>(parse_int_field(row[cols.play_index], "play_index_in_drive", line));
    if (p.play_index_in_drive < 1)
      throw DataError("line " + std::to_string(line) + ": play_index_in_drive must be >= 1");

    long long v = parse_int_field(row[cols.yardline], "yardline_100", line);
    check_range_int(v, 1, 99, "yardline_100", line);
    p.x.yardline_100 = static_cast<int>(v);

    v = parse_int_field(row[cols.down], "down", line);
    check_range_int(v, 1, 4, "down", line);
    p.x.down = static_cast<int>(v);

    v = parse_int_field(row[cols.ydstogo], "ydstogo", line);
    if (v < 1)
      throw DataError("line " + std::to_string(line) + ": ydstogo must be >= 1");
    p.x.ydstogo = static_cast<int>(v);

    p.x.half_seconds_remaining = parse_real_field(row[cols.half_seconds],
                                                  "half_seconds_remaining", line);
    if (p.x.half_seconds_remaining < 0.0)
      throw DataError("line " + std::to_string(line) + ": half_seconds_remaining must be >= 0");
    p.x.game_seconds_remaining = parse_real_field(row[cols.game_seconds],
                                                  "game_seconds_remaining", line);
    if (p.x.game_seconds_remaining < 0.0)
      throw DataError("line " + std::to_string(line) + ": game_seconds_remaining must be >= 0");

    v = parse_int_field(row[cols.pos_to], "posteam_timeouts_remaining", line);
    check_range_int(v, 0, 3, "posteam_timeouts_remaining", line);
    p.x.posteam_timeouts_remaining = static_cast<int>(v);

    v = parse_int_field(row[cols.def_to], "defteam_timeouts_remaining", line);
    check_range_int(v, 0, 3, "defteam_timeouts_remaining", line);
    p.x.defteam_timeouts_remaining = static_cast<int>(v);

    p.x.score_differential =
        static_cast<int>(parse_int_field(row[cols.score_diff], "score_differential", line));
    p.x.posteam_spread = parse_real_field(row[cols.spread], "posteam_spread", line);
    p.posteam_id = row[cols.posteam];
    if (cols.player) p.passer_or_rusher_id = row[*cols.player];

    try {
      p.play_type = play_type_from_label(row[cols.play_type]);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line) + ": " + e.what());
    }

    const std::string& outcome_field = row[cols.outcome];
    if (is_outcome_label(outcome_field)) {
      p.outcome_drive = outcome_from_label(outcome_field);
    } else {
      int pts = 0;
      if (cols.drive_points)
        pts = static_cast<int>(parse_int_field(row[*cols.drive_points], "drive_points", line));
      try {
        p.outcome_drive = map_drive_result(outcome_field, pts);
      } catch (const DataError& e) {
        throw DataError("line " + std::to_string(line) + ": " + e.what());
      }
    }

    p.season = static_cast<int>(parse_int_field(row[cols.season], "season", line));
    p.x.era = use_era_column
                  ? static_cast<int>(parse_int_field(row[*cols.era], "era", line))
                  : era_from_season(p.season);
    plays.push_back(std::move(p));
  }

  // Row filters. Dropped rows break play-index contiguity, so surviving
  // plays are re-indexed within their drive; relative order is kept.
  if (!cfg.exclude_play_types.empty()) {
    std::unordered_set<std::string> drives_before;
    for (const auto& p : plays) drives_before.insert(p.drive_id);
    std::vector<PlayRecord> kept;
    kept.reserve(plays.size());
    std::size_t dropped = 0;
    for (auto& p : plays) {
      bool excluded = std::find(cfg.exclude_play_types.begin(), cfg.exclude_play_types.end(),
                                p.play_type) != cfg.exclude_play_types.end();
      if (excluded) ++dropped;
      else kept.push_back(std::move(p));
    }
    plays = std::move(kept);
    if (dropped > 0) {
      std::unordered_set<std::string> drives_after;
      for (const auto& p : plays) drives_after.insert(p.drive_id);
      log_info("ingest: filtered " + std::to_string(dropped) + " plays by type; dropped " +
               std::to_string(drives_before.size() - drives_after.size()) + " emptied drives");
      if (!cfg.drop_empty_drives && drives_before.size() != drives_after.size())
        throw DataError("ingest: play-type filter emptied a drive and drop_empty_drives=false");
    }
  }

  // Input indices must be strictly increasing within a drive; after any
  // filtering they are renumbered contiguously from 1.
  std::size_t i = 0;
  while (i < plays.size()) {
    const std::string& id = plays[i].drive_id;
    int prev = 0;
    int next_index = 1;
    std::size_t j = i;
    for (; j < plays.size() && plays[j].drive_id == id; ++j) {
      if (plays[j].play_index_in_drive <= prev)
        throw DataError("drive \"" + id + "\": play_index_in_drive not increasing");
      prev = plays[j].play_index_in_drive;
      plays[j].play_index_in_drive = next_index++;
    }
    i = j;
  }

  return PlayDataset::from_plays(std::move(plays));
}

PlayDataset parse_play_csv(const std::string& path, const IngestConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_play_csv_text(ss.str(), cfg);
}

void write_play_csv(const std::string& path, const PlayDataset& ds) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(ds.n_plays());
  for (const PlayRecord& p : ds.plays()) {
    if (p.synthetic)
      throw ConfigError("write_play_csv: refusing to serialize catalytic augmentation rows");
    rows.push_back({
        p.drive_id,
        std::to_string(p.play_index_in_drive),
        std::to_string(p.x.yardline_100),
        std::to_string(p.x.down),
        std::to_string(p.x.ydstogo),
        format_double(p.x.half_seconds_remaining),
        format_double(p.x.game_seconds_remaining),
        std::to_string(p.x.era),
        std::to_string(p.x.posteam_timeouts_remaining),
        std::to_string(p.x.defteam_timeouts_remaining),
        std::to_string(p.x.score_differential),
        format_double(p.x.posteam_spread),
        p.posteam_id,
        p.passer_or_rusher_id,
        play_type_label(p.play_type),
        outcome_label(p.outcome_drive),
        std::to_string(p.season),
    });
  }
  write_csv(path, kCanonicalColumns, rows);
}

}  // namespace ep
