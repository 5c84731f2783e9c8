#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ltem {

// Flat `key = value` config files: '#' starts a comment, blank lines are
// ignored, keys are unique. Values keep their raw text; use the typed
// accessors to convert.
class KvFile {
 public:
  static KvFile parse_file(const std::string& path);   // throws ParseError
  static KvFile parse_text(const std::string& text, const std::string& origin = "<text>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;         // throws ParseError if missing
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::string origin_;
  std::vector<std::pair<std::string, std::string>> entries_;  // file order
  std::map<std::string, std::string> index_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Shortest-round-trip formatting for doubles ("%.17g" trimmed); integers as
// themselves. Keeps config and CSV files byte-stable across runs.
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);
std::int64_t parse_int(const std::string& s, const std::string& context);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ltem
