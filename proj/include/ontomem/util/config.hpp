#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ontomem::util {

// Flat `key = value` text. `#` starts a comment line; blank lines are
// skipped. A repeated key keeps its last value.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  void set(std::string key, std::string value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string dump() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ontomem::util
