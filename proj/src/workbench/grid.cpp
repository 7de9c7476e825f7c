#include "cloak/workbench/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cloak::workbench {
namespace {

double node(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

double FieldGrid::x(std::size_t i) const { return node(window.x_min, window.x_max, i, nx); }
double FieldGrid::y(std::size_t j) const { return node(window.y_min, window.y_max, j, ny); }
double ScalarGrid::x(std::size_t i) const { return node(window.x_min, window.x_max, i, nx); }
double ScalarGrid::y(std::size_t j) const { return node(window.y_min, window.y_max, j, ny); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t j = 0; j < count; ++j) body(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < count; j = next++) {
          try {
            body(j);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

FieldGrid sample_grid(const PointEvaluator& evaluator, Window window, std::size_t nx, std::size_t ny,
                      unsigned threads) {
  if (!window.valid()) throw std::invalid_argument("sample_grid: empty window");
  if (nx < 2 || ny < 2) throw std::invalid_argument("sample_grid: need at least 2 x 2 nodes");
  FieldGrid g{window, nx, ny, std::vector<cplx>(nx * ny), std::vector<Mask>(nx * ny, Mask::none)};
  parallel_for(ny, threads, [&](std::size_t j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < nx; ++i) {
      Sample s = evaluator(g.x(i), y);
      const bool finite = std::isfinite(s.value.real()) && std::isfinite(s.value.imag());
      if (!finite) {
        s.value = {};
        if (s.mask == Mask::none || s.mask == Mask::near_boundary) s.mask = Mask::singular;
      }
      g.values[g.index(i, j)] = s.value;
      g.mask[g.index(i, j)] = s.mask;
    }
  });
  return g;
}

ScalarGrid magnitude(const FieldGrid& grid) {
  ScalarGrid s{grid.window, grid.nx, grid.ny, std::vector<double>(grid.values.size())};
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    s.values[k] = grid.mask[k] == Mask::singular ? std::numeric_limits<double>::infinity()
                                                 : std::abs(grid.values[k]);
  }
  return s;
}

}  // namespace cloak::workbench
