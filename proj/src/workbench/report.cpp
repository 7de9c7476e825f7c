#include "cloak/workbench/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cloak::workbench {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void KeyValues::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValues::set(const std::string& key, double value) { set(key, format_double(value)); }
void KeyValues::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

void KeyValues::append(const KeyValues& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) set(prefix + k, v);
}

const std::string* KeyValues::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

KeyValues DiscrepancyReport::to_key_values() const {
  KeyValues kv;
  kv.set("rel_inc", rel_inc);
  kv.set("rel_scat", rel_scat);
  kv.set("quiet_zone_max", quiet_zone_max);
  kv.append(metrics);
  kv.append(config, "config.");
  return kv;
}

double l2_circle_discrepancy(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                             std::span<const double> weights) {
  if (a.size() != b.size() || a.size() != weights.size()) {
    throw std::invalid_argument("l2_circle_discrepancy: length mismatch");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += weights[j] * std::norm(a[j] - b[j]);
  return std::sqrt(s);
}

double l2_circle_norm(std::span<const std::complex<double>> a, std::span<const double> weights) {
  if (a.size() != weights.size()) throw std::invalid_argument("l2_circle_norm: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += weights[j] * std::norm(a[j]);
  return std::sqrt(s);
}

void write_grid_csv(std::ostream& os, const FieldGrid& grid) {
  os << "x,y,re,im,mask\n";
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const std::string y = format_double(grid.y(j));
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const auto& v = grid.at(i, j);
      os << format_double(grid.x(i)) << ',' << y << ',' << format_double(v.real()) << ','
         << format_double(v.imag()) << ',' << static_cast<int>(grid.mask[grid.index(i, j)]) << '\n';
    }
  }
}

FieldGrid read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,y,re,im,mask") throw std::runtime_error("grid csv line 1: bad header");
  std::vector<double> xs, ys;
  FieldGrid g;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[5];
    for (int c = 0; c < 5; ++c) {
      if (!std::getline(ls, f[c], c < 4 ? ',' : '\n')) {
        throw std::runtime_error("grid csv line " + std::to_string(lineno) + ": expected 5 fields");
      }
    }
    try {
      xs.push_back(std::stod(f[0]));
      ys.push_back(std::stod(f[1]));
      g.values.emplace_back(std::stod(f[2]), std::stod(f[3]));
      const int m = std::stoi(f[4]);
      if (m < 0 || m > 3) throw std::out_of_range("mask");
      g.mask.push_back(static_cast<Mask>(m));
    } catch (const std::exception&) {
      throw std::runtime_error("grid csv line " + std::to_string(lineno) + ": invalid number");
    }
  }
  std::size_t nx = 0;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (nx < 2 || ys.size() % nx != 0 || ys.size() / nx < 2) throw std::runtime_error("grid csv: not a full grid");
  g.nx = nx;
  g.ny = ys.size() / nx;
  g.window = {xs.front(), xs[nx - 1], ys.front(), ys.back()};
  return g;
}

void write_contour_csv(std::ostream& os, const ContourSet& contours) {
  os << "polyline,x,y\n";
  for (std::size_t p = 0; p < contours.polylines.size(); ++p) {
    for (const auto& pt : contours.polylines[p].points) {
      os << p << ',' << format_double(pt.x) << ',' << format_double(pt.y) << '\n';
    }
  }
}

void write_report(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv.entries()) os << k << " = " << v << '\n';
}

KeyValues read_report(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) {
      throw std::runtime_error("report line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    kv.set(line.substr(0, eq), line.substr(eq + 3));
  }
  return kv;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << contents;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace cloak::workbench
