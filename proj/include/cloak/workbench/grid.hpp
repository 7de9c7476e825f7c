#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cloak::workbench {

using cplx = std::complex<double>;

struct Window {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;

  bool valid() const { return x_max > x_min && y_max > y_min; }
};

enum class Mask : std::uint8_t {
  none = 0,
  singular = 1,       // not evaluable (source point, overflow)
  interior = 2,       // inside an obstacle
  near_boundary = 3,  // evaluated, reduced accuracy
};

struct Sample {
  cplx value;
  Mask mask = Mask::none;
};

using PointEvaluator = std::function<Sample(double x, double y)>;

/// Row-major samples: node (i, j) sits at x_i = x_min + i dx, y_j = y_min + j dy
/// and is stored at index j * nx + i. The corner nodes hit the window edges.
struct FieldGrid {
  Window window;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<cplx> values;
  std::vector<Mask> mask;

  double x(std::size_t i) const;
  double y(std::size_t j) const;
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  const cplx& at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
};

/// Evaluates on nx x ny nodes, parallel over rows. Non-finite values from
/// an unmasked sample are masked singular and zeroed instead of raising.
FieldGrid sample_grid(const PointEvaluator& evaluator, Window window, std::size_t nx, std::size_t ny,
                      unsigned threads = 0);

/// Real scalar field on the same node layout (used for contouring).
struct ScalarGrid {
  Window window;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  double x(std::size_t i) const;
  double y(std::size_t j) const;
};

/// |value| per node; singular nodes become +inf so level sets close around them.
ScalarGrid magnitude(const FieldGrid& grid);

/// Runs body(j) for j in [0, count) across worker threads.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace cloak::workbench
