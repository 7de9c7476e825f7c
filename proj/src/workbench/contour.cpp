#include "cloak/workbench/contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cloak::workbench {
namespace {

struct Segment {
  std::size_t a;  // edge keys
  std::size_t b;
};

}  // namespace

ContourSet contour_levelset(const ScalarGrid& grid, double level, EdgeInterpolation interp) {
  if (!(level > 0.0) && interp == EdgeInterpolation::log) {
    throw std::invalid_argument("contour_levelset: log interpolation needs a positive level");
  }
  ContourSet out;
  out.level = level;
  const std::size_t nx = grid.nx;
  const std::size_t ny = grid.ny;
  if (nx < 2 || ny < 2) return out;
  const auto val = [&](std::size_t i, std::size_t j) { return grid.values[j * nx + i]; };
  const auto above = [&](double v) { return v >= level; };  // NaN counts as below

  // Edge keys: horizontal edge from (i,j) to (i+1,j) -> 2(j nx + i),
  // vertical edge from (i,j) to (i,j+1) -> 2(j nx + i) + 1.
  std::unordered_map<std::size_t, ContourPoint> vertex;
  const auto crossing = [&](std::size_t key) {
    auto it = vertex.find(key);
    if (it != vertex.end()) return;
    const std::size_t base = key / 2;
    const std::size_t i = base % nx;
    const std::size_t j = base / nx;
    const bool horizontal = key % 2 == 0;
    const std::size_t i2 = horizontal ? i + 1 : i;
    const std::size_t j2 = horizontal ? j : j + 1;
    const double a = val(i, j);
    const double b = val(i2, j2);
    double t = 0.5;
    if (std::isfinite(a) && std::isfinite(b) && a != b) {
      if (interp == EdgeInterpolation::log && a > 0.0 && b > 0.0) {
        t = (std::log(level) - std::log(a)) / (std::log(b) - std::log(a));
      } else {
        t = (level - a) / (b - a);
      }
    }
    t = std::clamp(t, 0.0, 1.0);
    const double x0 = grid.x(i), y0 = grid.y(j);
    vertex.emplace(key, ContourPoint{x0 + t * (grid.x(i2) - x0), y0 + t * (grid.y(j2) - y0)});
  };

  std::vector<Segment> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double v00 = val(i, j), v10 = val(i + 1, j), v11 = val(i + 1, j + 1), v01 = val(i, j + 1);
      const bool s00 = above(v00), s10 = above(v10), s11 = above(v11), s01 = above(v01);
      const std::size_t bottom = 2 * (j * nx + i);
      const std::size_t top = 2 * ((j + 1) * nx + i);
      const std::size_t left = 2 * (j * nx + i) + 1;
      const std::size_t right = 2 * (j * nx + i + 1) + 1;

      std::size_t cut[4];
      int ncut = 0;
      if (s00 != s10) cut[ncut++] = bottom;
      if (s10 != s11) cut[ncut++] = right;
      if (s11 != s01) cut[ncut++] = top;
      if (s01 != s00) cut[ncut++] = left;
      if (ncut == 0) continue;
      for (int c = 0; c < ncut; ++c) crossing(cut[c]);
      if (ncut == 2) {
        segments.push_back({cut[0], cut[1]});
        continue;
      }
      // Saddle: s00 == s11 != s10 == s01.
      const double centre = 0.25 * (v00 + v10 + v11 + v01);
      if (above(centre) == s00) {
        segments.push_back({bottom, right});
        segments.push_back({top, left});
      } else {
        segments.push_back({left, bottom});
        segments.push_back({right, top});
      }
    }
  }

  // Each crossing vertex touches at most two segments.
  std::unordered_map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  const auto walk = [&](std::size_t start_seg, std::size_t start_key) {
    Polyline line;
    line.points.push_back(vertex.at(start_key));
    std::size_t seg = start_seg;
    std::size_t key = start_key;
    while (true) {
      used[seg] = true;
      const std::size_t next = segments[seg].a == key ? segments[seg].b : segments[seg].a;
      line.points.push_back(vertex.at(next));
      key = next;
      std::size_t follow = segments.size();
      for (std::size_t cand : incident[key]) {
        if (!used[cand]) {
          follow = cand;
          break;
        }
      }
      if (follow == segments.size()) break;
      seg = follow;
    }
    line.closed = key == start_key && line.points.size() > 2;
    return line;
  };

  // Open chains start at boundary vertices of degree one.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t key : {segments[s].a, segments[s].b}) {
      if (incident[key].size() == 1 && !used[s]) out.polylines.push_back(walk(s, key));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.polylines.push_back(walk(s, segments[s].a));
  }
  return out;
}

}  // namespace cloak::workbench
