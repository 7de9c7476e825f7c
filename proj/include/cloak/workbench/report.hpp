#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cloak/workbench/contour.hpp"
#include "cloak/workbench/grid.hpp"

namespace cloak::workbench {

/// Ordered key/value lines; values are preformatted strings.
class KeyValues {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, std::size_t value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void append(const KeyValues& other, const std::string& prefix = "");

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  const std::string* find(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest round-tripping decimal representation.
std::string format_double(double v);

struct DiscrepancyReport {
  double rel_inc = 0.0;
  double rel_scat = 0.0;
  double quiet_zone_max = 0.0;
  KeyValues config;   // every parameter used, including filled-in defaults
  KeyValues metrics;  // extra diagnostics

  KeyValues to_key_values() const;
};

/// sqrt(sum w_j |a_j - b_j|^2).
double l2_circle_discrepancy(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                             std::span<const double> weights);

/// sqrt(sum w_j |a_j|^2).
double l2_circle_norm(std::span<const std::complex<double>> a, std::span<const double> weights);

/// Grid CSV: header "x,y,re,im,mask", one row per node in storage order.
void write_grid_csv(std::ostream& os, const FieldGrid& grid);
/// Reads a grid written by write_grid_csv. Throws std::runtime_error with
/// the offending line number on malformed input.
FieldGrid read_grid_csv(std::istream& is);
/// Contour CSV: header "polyline,x,y".
void write_contour_csv(std::ostream& os, const ContourSet& contours);
/// "key = value" lines.
void write_report(std::ostream& os, const KeyValues& kv);

/// Parses the report format back (for tooling and tests).
KeyValues read_report(std::istream& is);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace cloak::workbench
