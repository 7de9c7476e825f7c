#include "cloak/workbench/experiment_config.hpp"

#include <cmath>
#include <tuple>

namespace cloak::workbench {
namespace {

std::vector<double> fixed_list(const FlatConfig& cfg, const std::string& key, std::size_t count,
                               std::vector<double> fallback) {
  if (!cfg.has(key)) return fallback;
  auto v = cfg.get_double_list(key);
  if (v.size() != count) {
    throw cfg.error(key, "'" + key + "' needs " + std::to_string(count) + " numbers");
  }
  return v;
}

std::size_t positive_size(const FlatConfig& cfg, const std::string& key, std::size_t fallback) {
  const int v = cfg.get_int(key, static_cast<int>(fallback));
  if (v < 1) throw cfg.error(key, "'" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

std::pair<std::size_t, std::size_t> grid_dims(const FlatConfig& cfg, const std::string& key, std::size_t nx,
                                              std::size_t ny) {
  const auto g = fixed_list(cfg, key, 2, {double(nx), double(ny)});
  for (double v : g)
    if (!(v >= 2.0) || v != std::floor(v) || v > 1e7) throw cfg.error(key, "'" + key + "' needs two integers >= 2");
  return {static_cast<std::size_t>(g[0]), static_cast<std::size_t>(g[1])};
}

}  // namespace

quasistatic::QuasistaticExperimentConfig quasistatic_config(const FlatConfig& cfg, const std::string& p) {
  quasistatic::QuasistaticExperimentConfig c;
  c.alpha_star = cfg.get_double(p + "alpha_star", c.alpha_star);
  c.delta_star = cfg.get_double(p + "delta_star", c.delta_star);
  c.gamma = cfg.get_double(p + "gamma", c.gamma);
  c.n = cfg.get_int(p + "n", c.n);
  const auto center = fixed_list(cfg, p + "disk.center", 2, {c.disk.center.real(), c.disk.center.imag()});
  c.disk.center = {center[0], center[1]};
  c.disk.radius = cfg.get_double(p + "disk.radius", c.disk.radius);
  c.disk.epsilon = cfg.get_double(p + "disk.epsilon", c.disk.epsilon);
  c.disk.series_order = cfg.get_int(p + "disk.series_order", c.disk.series_order);
  c.contour_radius = cfg.get_double(p + "contour_radius", c.contour_radius);
  if (cfg.has(p + "incident")) {
    const auto v = cfg.get_double_list(p + "incident");
    if (v.empty() || v.size() % 2) throw cfg.error(p + "incident", "'" + p + "incident' needs re im pairs");
    c.incident.coeffs.clear();
    for (std::size_t i = 0; i < v.size(); i += 2) c.incident.coeffs.emplace_back(v[i], v[i + 1]);
  }
  c.measurement_points = positive_size(cfg, p + "measurement_points", c.measurement_points);
  const auto w = fixed_list(cfg, p + "window", 4, {c.window.x_min, c.window.x_max, c.window.y_min, c.window.y_max});
  c.window = {w[0], w[1], w[2], w[3]};
  std::tie(c.nx, c.ny) = grid_dims(cfg, p + "grid", c.nx, c.ny);
  c.device_level = cfg.get_double(p + "device_level", c.device_level);
  c.quiet_level = cfg.get_double(p + "quiet_level", c.quiet_level);
  return c;
}

helmholtz::HelmholtzExperimentConfig helmholtz_config(const FlatConfig& cfg, const std::string& p) {
  helmholtz::HelmholtzExperimentConfig c;
  auto& h = c.cloak;
  h.k = cfg.get_double(p + "k", h.k);
  h.alpha_lambda = cfg.get_double(p + "alpha", h.alpha_lambda);
  h.delta_lambda = cfg.get_double(p + "delta", h.delta_lambda);
  h.gamma_lambda = cfg.get_double(p + "gamma", h.gamma_lambda);
  h.devices = cfg.get_int(p + "devices", h.devices);
  h.order = cfg.get_int(p + "N", h.order);
  const double both = cfg.get_double(p + "max_spacing", 0.0);
  if (both != 0.0) h.alpha_spacing_lambda = h.gamma_spacing_lambda = both;
  h.alpha_spacing_lambda = cfg.get_double(p + "alpha_spacing", h.alpha_spacing_lambda);
  h.gamma_spacing_lambda = cfg.get_double(p + "gamma_spacing", h.gamma_spacing_lambda);
  h.tau_a = cfg.get_double(p + "tauA", h.tau_a);
  h.tau_b = cfg.get_double(p + "tauB", h.tau_b);
  h.device_angles = cfg.get_double_list(p + "device_angles");
  h.incident_angle = cfg.get_double(p + "incident_angle", h.incident_angle);
  const std::string obstacle = cfg.get_string(p + "obstacle", "kite");
  if (obstacle != "kite" && obstacle != "none") throw cfg.error(p + "obstacle", "'obstacle' must be kite or none");
  c.obstacle = obstacle == "kite";
  c.kite_scale_lambda = cfg.get_double(p + "kite_scale", c.kite_scale_lambda);
  const auto kc = fixed_list(cfg, p + "kite_center", 2, {c.kite_center_lambda.x, c.kite_center_lambda.y});
  c.kite_center_lambda = {kc[0], kc[1]};
  c.nystrom_q = cfg.get_int(p + "nystrom_q", c.nystrom_q);
  c.measurement_points = positive_size(cfg, p + "measurement_points", c.measurement_points);
  const auto w = fixed_list(cfg, p + "window", 4,
                            {c.window_lambda.x_min, c.window_lambda.x_max, c.window_lambda.y_min, c.window_lambda.y_max});
  c.window_lambda = {w[0], w[1], w[2], w[3]};
  std::tie(c.nx, c.ny) = grid_dims(cfg, p + "grid", c.nx, c.ny);
  c.device_level = cfg.get_double(p + "device_level", c.device_level);
  return c;
}

}  // namespace cloak::workbench
