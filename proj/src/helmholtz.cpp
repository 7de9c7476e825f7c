#include "cloak/helmholtz.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cloak/specfun.hpp"
#include "cloak/workbench/report.hpp"

namespace cloak::helmholtz {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double HelmholtzCloakConfig::wavelength() const { return 2.0 * kPi / k; }

Vec2 HelmholtzCloakConfig::direction() const { return {std::cos(incident_angle), std::sin(incident_angle)}; }

std::vector<double> HelmholtzCloakConfig::resolved_device_angles() const {
  if (!device_angles.empty()) return device_angles;
  std::vector<double> a(static_cast<std::size_t>(std::max(devices, 0)));
  for (int m = 0; m < devices; ++m) a[m] = 0.5 * kPi + 2.0 * kPi * m / devices;
  return a;
}

void HelmholtzCloakConfig::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber k must be positive");
  if (!(alpha_lambda > 0.0 && alpha_lambda < delta_lambda && delta_lambda < gamma_lambda)) {
    throw std::invalid_argument("geometry requires 0 < alpha < delta < gamma");
  }
  if (devices < 1) throw std::invalid_argument("need at least one device");
  if (order < 0) throw std::invalid_argument("ansatz order N must be non-negative");
  if (order > specfun::kDefaultMaxOrder) throw std::invalid_argument("ansatz order N exceeds supported Bessel order");
  if (!(alpha_spacing_lambda > 0.0 && gamma_spacing_lambda > 0.0)) throw std::invalid_argument("control point spacing must be positive");
  if (!device_angles.empty() && static_cast<int>(device_angles.size()) != devices) {
    throw std::invalid_argument("device_angles must list exactly D angles");
  }
  (void)linalg::TruncationPolicy(tau_a);
  (void)linalg::TruncationPolicy(tau_b);
  const auto angles = resolved_device_angles();
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j)
      if (norm(polar(1.0, angles[i]) - polar(1.0, angles[j])) < 1e-12)
        throw std::invalid_argument("device positions must be distinct");
}

DeviceArray device_layout(const HelmholtzCloakConfig& config) {
  DeviceArray d;
  d.order = config.order;
  for (double a : config.resolved_device_angles()) d.positions.push_back(polar(config.delta(), a));
  d.coeffs.assign(d.size() * config.coefficients_per_device(), cplx{});
  return d;
}

ControlPointSet control_points(double radius, double max_spacing) {
  if (!(radius > 0.0 && max_spacing > 0.0)) throw std::invalid_argument("control_points: radius and spacing must be positive");
  const double circumference = 2.0 * kPi * radius;
  const auto p = static_cast<std::size_t>(std::floor(circumference / max_spacing)) + 1;
  ControlPointSet set;
  set.radius = radius;
  set.points.reserve(p);
  for (std::size_t j = 0; j < p; ++j) set.points.push_back(polar(radius, 2.0 * kPi * static_cast<double>(j) / p));
  set.weight = circumference / static_cast<double>(p);
  set.degenerate = p == 1;
  return set;
}

ControlPointSet measurement_circle(double radius, std::size_t count) {
  if (count == 0) throw std::invalid_argument("measurement_circle: need at least one point");
  ControlPointSet set;
  set.radius = radius;
  for (std::size_t j = 0; j < count; ++j)
    set.points.push_back(polar(radius, 2.0 * kPi * (static_cast<double>(j) + 0.5) / count));
  set.weight = 2.0 * kPi * radius / static_cast<double>(count);
  return set;
}

cplx plane_wave(Vec2 x, double k, Vec2 d) {
  if (std::abs(norm(d) - 1.0) > 1e-12) throw std::invalid_argument("plane_wave: direction must be a unit vector");
  const double ph = k * dot(x, d);
  return {std::cos(ph), std::sin(ph)};
}

void device_row(Vec2 x, const DeviceArray& layout, double k, std::span<cplx> row) {
  const int n_max = layout.order;
  const std::size_t per = 2 * static_cast<std::size_t>(n_max) + 1;
  if (row.size() != layout.size() * per) throw std::length_error("device_row: row length mismatch");
  std::vector<cplx> h(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t m = 0; m < layout.size(); ++m) {
    const Vec2 rel = x - layout.positions[m];
    const double r = norm(rel);
    if (r == 0.0) throw std::domain_error("device field evaluated at a device location");
    specfun::hankel1_sequence(n_max, k * r, h);
    const double th = angle(rel);
    cplx* out = row.data() + m * per;
    out[n_max] = h[0];
    for (int n = 1; n <= n_max; ++n) {
      const cplx e{std::cos(n * th), std::sin(n * th)};
      out[n_max + n] = h[n] * e;
      // H_{-n} e^{-i n th} = (-1)^n H_n conj(e)
      out[n_max - n] = ((n & 1) ? -1.0 : 1.0) * h[n] * std::conj(e);
    }
  }
}

cplx device_field(Vec2 x, const DeviceArray& devices, double k) {
  std::vector<cplx> row(devices.coeffs.size());
  device_row(x, devices, k, row);
  cplx s{};
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (devices.coeffs[i] != cplx{}) s += row[i] * devices.coeffs[i];
  }
  return s;
}

CloakSystem assemble_matrices(const HelmholtzCloakConfig& config) {
  config.validate();
  CloakSystem sys;
  sys.layout = device_layout(config);
  sys.alpha_points = control_points(config.alpha(), config.alpha_spacing());
  sys.gamma_points = control_points(config.gamma(), config.gamma_spacing());
  const std::size_t cols = sys.layout.coeffs.size();
  sys.a = linalg::CMatrix(sys.alpha_points.points.size(), cols);
  sys.b = linalg::CMatrix(sys.gamma_points.points.size(), cols);
  for (std::size_t j = 0; j < sys.alpha_points.points.size(); ++j)
    device_row(sys.alpha_points.points[j], sys.layout, config.k, sys.a.row(j));
  for (std::size_t j = 0; j < sys.gamma_points.points.size(); ++j)
    device_row(sys.gamma_points.points[j], sys.layout, config.k, sys.b.row(j));
  const Vec2 d = config.direction();
  for (const Vec2& p : sys.alpha_points.points) sys.incident_alpha.push_back(plane_wave(p, config.k, d));
  return sys;
}

CloakSolution solve_cloak(const CloakSystem& sys, const HelmholtzCloakConfig& config,
                          std::span<const cplx> incident_alpha) {
  const linalg::TruncationPolicy ta(config.tau_a), tb(config.tau_b);
  auto res = linalg::two_step_solve(sys.a, sys.b, incident_alpha, ta, tb);
  CloakSolution sol;
  sol.devices = sys.layout;
  sol.devices.coeffs = std::move(res.b);
  sol.solve = res.report;
  const double ui_alpha = linalg::norm(incident_alpha);
  sol.quiet_zone_residual = ui_alpha > 0.0 ? res.report.first_residual / ui_alpha : 0.0;
  // |u_i| = 1 on the gamma circle for a unit plane wave; scale with the trace.
  const double scale = sys.incident_alpha.empty() ? 0.0 : ui_alpha / linalg::norm(sys.incident_alpha);
  const double ui_gamma = scale * std::sqrt(static_cast<double>(sys.gamma_points.points.size()));
  sol.exterior_leakage = ui_gamma > 0.0 ? res.report.second_objective / ui_gamma : 0.0;
  return sol;
}

CloakSolution solve_cloak(const HelmholtzCloakConfig& config, cplx incident_scale) {
  const CloakSystem sys = assemble_matrices(config);
  linalg::CVector ui = sys.incident_alpha;
  for (auto& v : ui) v *= incident_scale;
  return solve_cloak(sys, config, ui);
}

void write_coefficients(std::ostream& os, const DeviceArray& devices) {
  os << "device,n,re,im\n";
  for (std::size_t m = 0; m < devices.size(); ++m) {
    for (int n = -devices.order; n <= devices.order; ++n) {
      const cplx c = devices.coeff(m, n);
      os << m << ',' << n << ',' << workbench::format_double(c.real()) << ',' << workbench::format_double(c.imag())
         << '\n';
    }
  }
}

DeviceArray read_coefficients(std::istream& is, const DeviceArray& layout) {
  DeviceArray d = layout;
  std::fill(d.coeffs.begin(), d.coeffs.end(), cplx{});
  std::vector<bool> seen(d.coeffs.size(), false);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "device,n,re,im") throw std::runtime_error("coefficient table: bad header");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fm, fn, fr, fi;
    if (!std::getline(ls, fm, ',') || !std::getline(ls, fn, ',') || !std::getline(ls, fr, ',') ||
        !std::getline(ls, fi)) {
      throw std::runtime_error("coefficient table line " + std::to_string(lineno) + ": expected 4 fields");
    }
    try {
      const long m = std::stol(fm);
      const int n = std::stoi(fn);
      if (m < 0 || static_cast<std::size_t>(m) >= d.size() || n < -d.order || n > d.order) {
        throw std::out_of_range("index");
      }
      const std::size_t idx = d.index(static_cast<std::size_t>(m), n);
      d.coeffs[idx] = {std::stod(fr), std::stod(fi)};
      seen[idx] = true;
    } catch (const std::exception&) {
      throw std::runtime_error("coefficient table line " + std::to_string(lineno) + ": invalid entry");
    }
  }
  for (bool s : seen)
    if (!s) throw std::runtime_error("coefficient table is missing entries");
  return d;
}

}  // namespace cloak::helmholtz
