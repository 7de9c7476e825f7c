#include "cloak/workbench/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace cloak::workbench {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

FlatConfig FlatConfig::parse(std::istream& is, const std::string& source) {
  FlatConfig cfg;
  cfg.source_ = source;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, lineno, "empty key");
    if (value.empty()) throw ConfigError(source, lineno, "empty value for '" + key + "'");
    if (cfg.has(key)) throw ConfigError(source, lineno, "duplicate key '" + key + "'");
    cfg.entries_[key] = {value, lineno};
  }
  return cfg;
}

FlatConfig FlatConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  return parse(in, path);
}

void FlatConfig::set(const std::string& key, const std::string& value, int line) { entries_[key] = {value, line}; }

ConfigError FlatConfig::error(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  return ConfigError(source_, it == entries_.end() ? 0 : it->second.line, message);
}

const FlatConfig::Entry* FlatConfig::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  const Entry* e = lookup(key);
  if (!e) return fallback;
  double v = 0.0;
  if (!parse_number(e->value, v)) throw ConfigError(source_, e->line, "'" + key + "' is not a number");
  return v;
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
  const Entry* e = lookup(key);
  if (!e) return fallback;
  int v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ConfigError(source_, e->line, "'" + key + "' is not an integer");
  return v;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = lookup(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "on" || e->value == "1") return true;
  if (e->value == "false" || e->value == "off" || e->value == "0") return false;
  throw ConfigError(source_, e->line, "'" + key + "' is not a boolean");
}

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = lookup(key);
  return e ? e->value : fallback;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) const {
  const Entry* e = lookup(key);
  std::vector<double> out;
  if (!e) return out;
  std::string text = e->value;
  for (char& c : text)
    if (c == ',') c = ' ';
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    double v = 0.0;
    if (!parse_number(tok, v)) throw ConfigError(source_, e->line, "'" + key + "' has a non-numeric entry");
    out.push_back(v);
  }
  return out;
}

void FlatConfig::reject_unused() const {
  for (const auto& [key, entry] : entries_) {
    if (!used_.count(key)) throw ConfigError(source_, entry.line, "unknown key '" + key + "'");
  }
}

}  // namespace cloak::workbench
