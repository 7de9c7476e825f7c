#pragma once

#include <vector>

#include "cloak/workbench/grid.hpp"

namespace cloak::workbench {

struct ContourPoint {
  double x;
  double y;
};

struct Polyline {
  std::vector<ContourPoint> points;  // closed polylines repeat the first point at the end
  bool closed = false;
};

struct ContourSet {
  double level = 0.0;
  std::vector<Polyline> polylines;
};

enum class EdgeInterpolation {
  linear,  // in the field value
  log,     // in log(value); better for magnitudes spanning decades
};

/// Marching squares with edge-shared vertices stitched into polylines.
/// Saddle cells are resolved with the cell-centre average. A level outside
/// the data range yields an empty set.
ContourSet contour_levelset(const ScalarGrid& grid, double level,
                            EdgeInterpolation interp = EdgeInterpolation::linear);

}  // namespace cloak::workbench
