#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ep {

// Plain-text `key = value` configuration. One pair per line, `#` comments,
// whitespace-insensitive keys. Values keep interior whitespace.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_text(const std::string& text);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_real(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-separated
  std::vector<double> get_real_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  // Keys that share a prefix like "rename.": returns {suffix -> value}.
  std::map<std::string, std::string> with_prefix(const std::string& prefix) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Serialized `key = value` lines in sorted key order.
  std::string to_text() const;
  void write_file(const std::string& path) const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ep
