#pragma once

// Flat "key = value" configuration files. Blank lines and lines starting
// with '#' are ignored. Every key may appear once.

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloak::workbench {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

class FlatConfig {
 public:
  static FlatConfig parse(std::istream& is, const std::string& source = "<config>");
  static FlatConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  /// Whitespace- or comma-separated numbers.
  std::vector<double> get_double_list(const std::string& key) const;

  /// Throws ConfigError naming the first key no getter asked for.
  void reject_unused() const;

  void set(const std::string& key, const std::string& value, int line = 0);

  /// Error tagged with the line on which `key` was defined.
  ConfigError error(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* lookup(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace cloak::workbench
