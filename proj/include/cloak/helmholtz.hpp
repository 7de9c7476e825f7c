#pragma once

// Active exterior cloak for the 2D Helmholtz equation: D point devices on
// the circle |x| = delta radiate
//   u_d(x) = sum_m sum_{n=-N..N} b_{m,n} H^{(1)}_n(k |x - x_m|) e^{i n theta_m},
// with b chosen so that u_d ~ -u_i on |x| <= alpha and u_d ~ 0 on |x| >= gamma.

#include <complex>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "cloak/cxlinalg.hpp"
#include "cloak/geometry.hpp"

namespace cloak::helmholtz {

using cplx = std::complex<double>;

/// Lengths ending in _lambda are in wavelengths; accessors return problem units.
struct HelmholtzCloakConfig {
  double k = 1.0;
  double alpha_lambda = 2.0;
  double delta_lambda = 10.0;
  double gamma_lambda = 20.0;
  int devices = 3;
  int order = 57;  // N; M = 2N + 1 coefficients per device
  double alpha_spacing_lambda = 0.125;  // control-point spacing bound on |x| = alpha
  double gamma_spacing_lambda = 0.5;    // control-point spacing bound on |x| = gamma
  double tau_a = 1e-10;
  double tau_b = 1e-6;
  std::vector<double> device_angles;  // empty: pi/2 + 2 pi m / D
  double incident_angle = 2.0 * std::numbers::pi / 7.0;

  double wavelength() const;
  double alpha() const { return alpha_lambda * wavelength(); }
  double delta() const { return delta_lambda * wavelength(); }
  double gamma() const { return gamma_lambda * wavelength(); }
  double alpha_spacing() const { return alpha_spacing_lambda * wavelength(); }
  double gamma_spacing() const { return gamma_spacing_lambda * wavelength(); }
  Vec2 direction() const;
  std::vector<double> resolved_device_angles() const;
  std::size_t coefficients_per_device() const { return 2 * static_cast<std::size_t>(order) + 1; }

  /// Throws std::invalid_argument listing the first violated constraint.
  void validate() const;
};

/// Device positions and their coefficient blocks. Storage is device-major,
/// order ascending: index(m, n) = m (2N + 1) + (n + N).
struct DeviceArray {
  std::vector<Vec2> positions;
  int order = 0;
  std::vector<cplx> coeffs;

  std::size_t size() const { return positions.size(); }
  std::size_t index(std::size_t m, int n) const {
    return m * (2 * static_cast<std::size_t>(order) + 1) + static_cast<std::size_t>(n + order);
  }
  cplx coeff(std::size_t m, int n) const { return coeffs[index(m, n)]; }
  cplx& coeff(std::size_t m, int n) { return coeffs[index(m, n)]; }
};

DeviceArray device_layout(const HelmholtzCloakConfig& config);

struct ControlPointSet {
  double radius = 0.0;
  std::vector<Vec2> points;
  double weight = 0.0;              // arc length per point
  bool degenerate = false;          // spacing exceeds the circumference: one point only
};

/// Smallest P with 2 pi r / P < max_spacing, points at angles 2 pi j / P.
ControlPointSet control_points(double radius, double max_spacing);

/// Uniform circle samples for measurement, offset by half a step.
ControlPointSet measurement_circle(double radius, std::size_t count);

/// exp(i k x.d); throws std::invalid_argument for |d| != 1.
cplx plane_wave(Vec2 x, double k, Vec2 d);

/// Throws std::domain_error when x coincides with a device.
cplx device_field(Vec2 x, const DeviceArray& devices, double k);

/// Row of the ansatz matrix at x: entry (m, n) = H_n(k|x - x_m|) e^{i n theta_m}.
void device_row(Vec2 x, const DeviceArray& layout, double k, std::span<cplx> row);

struct CloakSystem {
  linalg::CMatrix a;
  linalg::CMatrix b;
  linalg::CVector incident_alpha;
  ControlPointSet alpha_points;
  ControlPointSet gamma_points;
  DeviceArray layout;
};

CloakSystem assemble_matrices(const HelmholtzCloakConfig& config);

struct CloakSolution {
  DeviceArray devices;
  linalg::SolveDiagnostics solve;
  double quiet_zone_residual = 0.0;  // ||A b + u_i|| / ||u_i|| at the alpha control points
  double exterior_leakage = 0.0;     // ||B b|| / ||u_i on gamma control points||
};

/// Scales the incident field by `incident_scale` (linearity checks).
CloakSolution solve_cloak(const HelmholtzCloakConfig& config, cplx incident_scale = 1.0);

/// Same pipeline for an arbitrary incident trace on the alpha control points.
CloakSolution solve_cloak(const CloakSystem& system, const HelmholtzCloakConfig& config,
                          std::span<const cplx> incident_alpha);

/// Text table "device,n,re,im" with round-tripping decimals.
void write_coefficients(std::ostream& os, const DeviceArray& devices);
/// Reads a table written by write_coefficients into a copy of `layout`.
DeviceArray read_coefficients(std::istream& is, const DeviceArray& layout);

}  // namespace cloak::helmholtz
