#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pharm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain-text `key = value` configuration with dotted section keys and `#`
// comments. Keys are documented in docs/config_schema.txt.
struct RunConfig {
  std::map<std::string, std::string> kv;

  static RunConfig load(const std::string& path);
  void apply_override(const std::string& assignment);  // "key=value"

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::string require(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  std::uint64_t hash() const;  // FNV-1a over the normalized entries
};

}  // namespace pharm
