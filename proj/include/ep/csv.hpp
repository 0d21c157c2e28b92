#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ep {

// Minimal RFC-4180-ish CSV: comma-delimited, double-quote escaping,
// header row required by all callers in this project.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number of each row in the source file (header is line 1).
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv_text(const std::string& text);

std::string csv_escape(const std::string& field);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Round-trip-exact double formatting for CSV output.
std::string format_double(double v);

}  // namespace ep
