#pragma once

// Sound-soft kite inside the cloaked disk, lit by a plane wave, with the
// Helmholtz devices inactive and active.

#include <cstddef>
#include <optional>

#include "cloak/bie.hpp"
#include "cloak/helmholtz.hpp"
#include "cloak/workbench/contour.hpp"
#include "cloak/workbench/grid.hpp"
#include "cloak/workbench/report.hpp"

namespace cloak::helmholtz {

struct HelmholtzExperimentConfig {
  HelmholtzCloakConfig cloak;
  bool obstacle = true;
  double kite_scale_lambda = 0.5 / std::numbers::pi;  // scale 1 in problem units when k = 1
  Vec2 kite_center_lambda{};
  int nystrom_q = 64;
  std::size_t measurement_points = 1024;
  workbench::Window window_lambda{-25.0, 25.0, -25.0, 25.0};
  std::size_t nx = 301;
  std::size_t ny = 301;
  double device_level = 100.0;

  bie::ParamCurve kite() const;
  workbench::Window window() const;
  void validate() const;
  workbench::KeyValues echo() const;
};

/// Evaluators for one solved configuration. The obstacle sees u_i (+ u_d
/// when on); its scattered field does not feed back into the devices.
class HelmholtzScene {
 public:
  HelmholtzScene(const HelmholtzExperimentConfig& config, const CloakSolution& solution, bool devices_on);

  cplx incident(Vec2 x) const { return plane_wave(x, k_, d_); }
  cplx devices(Vec2 x) const;
  cplx scattered(Vec2 x) const;
  workbench::Sample total(Vec2 x) const;
  const std::optional<bie::NystromSolution>& obstacle() const { return obstacle_; }

 private:
  double k_;
  Vec2 d_;
  bool on_;
  const DeviceArray* devices_;
  std::optional<bie::NystromSolution> obstacle_;
};

struct HelmholtzRun {
  CloakSolution solution;
  workbench::DiscrepancyReport report;
  std::optional<workbench::FieldGrid> grid_off;
  std::optional<workbench::FieldGrid> grid_on;
  workbench::ContourSet device_contour;  // |u_d| = device_level
};

struct HelmholtzRequest {
  bool grid_off = true;
  bool grid_on = true;
  bool contours = true;
};

HelmholtzRun run_helmholtz_experiment(const HelmholtzExperimentConfig& config, const HelmholtzRequest& request = {});

}  // namespace cloak::helmholtz
