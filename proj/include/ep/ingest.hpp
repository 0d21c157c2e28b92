#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ep/config.hpp"
#include "ep/dataset.hpp"

namespace ep {

// Ingest options, loadable from a key-value config file:
//   rename.<canonical> = <source column>   remap input column names
//   exclude_play_types = other             comma list of types to drop
//   era.mode = auto|column|season_bins     era source (auto prefers column)
//   drop_empty_drives = true               drop drives emptied by filters
struct IngestConfig {
  std::map<std::string, std::string> column_renames;  // canonical -> source
  std::vector<PlayType> exclude_play_types;
  enum class EraMode { Auto, Column, SeasonBins } era_mode = EraMode::Auto;
  bool drop_empty_drives = true;

  static IngestConfig from_config(const KeyValueConfig& cfg);
};

// Era bins derived from season when the CSV has no era column:
// <=2013 -> 0, 2014..2017 -> 1, >=2018 -> 2.
int era_from_season(int season);

// Maps a source drive-result token (plus the drive's net points, used to
// disambiguate defensive scores) onto the 5-way outcome. Unknown tokens
// are an error, never silently dropped.
DriveOutcome map_drive_result(const std::string& raw_result, int raw_points);

// Parses a play-by-play CSV into a validated dataset. Unit weights;
// callers pick a scheme via compute_play_weights.
PlayDataset parse_play_csv(const std::string& path, const IngestConfig& cfg = {});
PlayDataset parse_play_csv_text(const std::string& text, const IngestConfig& cfg = {});

// Canonical-schema CSV writer; parse(write(ds)) == ds.
void write_play_csv(const std::string& path, const PlayDataset& ds);

// Required canonical columns, in output order.
const std::vector<std::string>& canonical_columns();

}  // namespace ep
