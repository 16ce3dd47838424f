#include "pharm/config.hpp"

#include <fstream>
#include <sstream>

namespace pharm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    cfg.kv[key] = val;
  }
  return cfg;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + assignment);
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("missing required config key: " + key);
  return it->second;
}

double RunConfig::get_num(const std::string& key, double fallback) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + it->second);
  }
}

long RunConfig::get_int(const std::string& key, long fallback) const {
  const double v = get_num(key, static_cast<double>(fallback));
  return static_cast<long>(v);
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  const auto it = kv.find(key);
  if (it == kv.end()) return out;
  std::string s = it->second;
  for (char& c : s)
    if (c == '(' || c == ')' || c == ',') c = ' ';
  std::stringstream ss(s);
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
  };
  for (const auto& [k, v] : kv) {
    mix(k);
    mix(v);
  }
  return h;
}

}  // namespace pharm
