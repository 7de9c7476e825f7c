#pragma once

// Near-resonant disk in a uniform field, with and without the quasistatic
// cloaking device. All fields are complex potentials; real parts are physical.

#include <cstddef>
#include <optional>

#include "cloak/quasistatic.hpp"
#include "cloak/workbench/contour.hpp"
#include "cloak/workbench/grid.hpp"
#include "cloak/workbench/report.hpp"

namespace cloak::quasistatic {

struct QuasistaticExperimentConfig {
  double alpha_star = 0.2;
  double delta_star = 1.0;
  double gamma = 5.0;
  int n = 10;
  DiskScatterer disk;
  double contour_radius = 0.5;  // Cauchy circle for the Taylor expansion about the disk
  IncidentPolynomial incident = IncidentPolynomial::identity();
  std::size_t measurement_points = 512;
  workbench::Window window{-3.0, 3.0, -3.0, 3.0};
  std::size_t nx = 301;
  std::size_t ny = 301;
  double device_level = 100.0;  // |h(1/s)| contour traced as the device outline
  double quiet_level = 0.01;    // |h(1/s)| contour around the cloaked region

  HermiteCloakSpec spec() const { return HermiteCloakSpec::from_star(alpha_star, delta_star, gamma, n); }
  /// Throws std::invalid_argument on geometry or parameter violations.
  void validate() const;
  workbench::KeyValues echo() const;
};

/// Total potential evaluators for one configuration.
class QuasistaticScene {
 public:
  QuasistaticScene(const QuasistaticExperimentConfig& config, bool devices_on);

  /// Incident + device (if on) + disk response. Inside the disk the
  /// interior solution is returned and the sample is masked interior.
  workbench::Sample total(cplx s) const;
  cplx incident(cplx s) const { return incident_(s); }
  /// Field that drives the disk: F, plus V(1/s) when the device is on.
  cplx driving(cplx s) const;
  const std::vector<cplx>& disk_coeffs() const { return coeffs_; }
  bool devices_on() const { return on_; }

 private:
  HermiteCloakSpec spec_;
  DiskScatterer disk_;
  IncidentPolynomial incident_;
  bool on_;
  std::vector<cplx> coeffs_;
};

struct QuasistaticRun {
  workbench::DiscrepancyReport report;
  std::optional<workbench::FieldGrid> grid_off;
  std::optional<workbench::FieldGrid> grid_on;
  workbench::ContourSet device_contour;  // |h(1/s)| = device_level
  workbench::ContourSet quiet_contour;   // |h(1/s)| = quiet_level
};

struct QuasistaticRequest {
  bool grid_off = true;
  bool grid_on = true;
  bool contours = true;
};

QuasistaticRun run_quasistatic_experiment(const QuasistaticExperimentConfig& config,
                                          const QuasistaticRequest& request = {});

/// |h(z)| on the z-plane window (the level-set figure of the polynomial).
workbench::FieldGrid hermite_grid(int n, double delta_star, workbench::Window window, std::size_t nx,
                                  std::size_t ny);

}  // namespace cloak::quasistatic
