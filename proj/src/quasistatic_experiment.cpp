#include "cloak/quasistatic_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cloak::quasistatic {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> circle_samples(double radius, std::size_t count) {
  std::vector<cplx> s(count);
  for (std::size_t j = 0; j < count; ++j) s[j] = std::polar(radius, 2.0 * kPi * (static_cast<double>(j) + 0.5) / count);
  return s;
}

workbench::FieldGrid sample_scene(const QuasistaticScene& scene, const QuasistaticExperimentConfig& cfg) {
  return workbench::sample_grid([&](double x, double y) { return scene.total({x, y}); }, cfg.window, cfg.nx,
                                cfg.ny);
}

}  // namespace

void QuasistaticExperimentConfig::validate() const {
  const HermiteCloakSpec s = spec();
  disk.validate();
  if (incident.degree() > n) throw std::invalid_argument("incident polynomial degree exceeds n");
  if (!(contour_radius > disk.radius)) throw std::invalid_argument("Cauchy contour must enclose the disk");
  if (!(contour_radius < std::abs(disk.center))) throw std::invalid_argument("Cauchy contour must exclude s = 0");
  if (measurement_points < 1) throw std::invalid_argument("measurement_points must be positive");
  if (!window.valid() || nx < 2 || ny < 2) throw std::invalid_argument("grid needs a valid window and nx, ny >= 2");
  if (!(device_level > 0.0 && quiet_level > 0.0)) throw std::invalid_argument("contour levels must be positive");
  if (std::abs(disk.center) + disk.radius >= s.gamma) {
    throw std::invalid_argument("disk must lie inside the measurement circle");
  }
}

workbench::KeyValues QuasistaticExperimentConfig::echo() const {
  const HermiteCloakSpec s = spec();
  workbench::KeyValues kv;
  kv.set("alpha_star", alpha_star);
  kv.set("delta_star", delta_star);
  kv.set("alpha", s.alpha);
  kv.set("delta", s.delta);
  kv.set("gamma", gamma);
  kv.set("n", n);
  kv.set("cloaking_regime", s.cloaking_regime());
  kv.set("disk.center_re", disk.center.real());
  kv.set("disk.center_im", disk.center.imag());
  kv.set("disk.radius", disk.radius);
  kv.set("disk.epsilon", disk.epsilon);
  kv.set("disk.series_order", disk.series_order);
  kv.set("disk.reflection", disk.reflection());
  kv.set("contour_radius", contour_radius);
  std::string coeffs;
  for (std::size_t k = 0; k < incident.coeffs.size(); ++k) {
    if (k) coeffs += ' ';
    coeffs += workbench::format_double(incident.coeffs[k].real());
    coeffs += incident.coeffs[k].imag() < 0 ? "-" : "+";
    coeffs += workbench::format_double(std::abs(incident.coeffs[k].imag())) + "i";
  }
  kv.set("incident_coeffs", coeffs);
  kv.set("measurement_points", measurement_points);
  kv.set("window.x_min", window.x_min);
  kv.set("window.x_max", window.x_max);
  kv.set("window.y_min", window.y_min);
  kv.set("window.y_max", window.y_max);
  kv.set("grid.nx", nx);
  kv.set("grid.ny", ny);
  kv.set("device_level", device_level);
  kv.set("quiet_level", quiet_level);
  return kv;
}

QuasistaticScene::QuasistaticScene(const QuasistaticExperimentConfig& config, bool devices_on)
    : spec_(config.spec()), disk_(config.disk), incident_(config.incident), on_(devices_on) {
  config.validate();
  coeffs_ = taylor_coeffs([this](cplx s) { return driving(s); }, disk_.center, config.contour_radius,
                          disk_.series_order);
}

cplx QuasistaticScene::driving(cplx s) const {
  cplx v = incident_(s);
  if (on_) v += device_potential_s(s, spec_, incident_);
  return v;
}

workbench::Sample QuasistaticScene::total(cplx s) const {
  if (std::abs(s - disk_.center) < disk_.radius) {
    return {disk_interior_potential(coeffs_, disk_, s), workbench::Mask::interior};
  }
  if (on_ && s == cplx{}) return {cplx{}, workbench::Mask::singular};
  return {driving(s) + disk_scattered_potential(coeffs_, disk_, s), workbench::Mask::none};
}

QuasistaticRun run_quasistatic_experiment(const QuasistaticExperimentConfig& config,
                                          const QuasistaticRequest& request) {
  config.validate();
  const HermiteCloakSpec spec = config.spec();
  const QuasistaticScene on(config, true);
  const QuasistaticScene off(config, false);

  const auto pts = circle_samples(config.gamma, config.measurement_points);
  const std::vector<double> w(pts.size(), 2.0 * kPi * config.gamma / static_cast<double>(pts.size()));
  // Physical fields are real parts of the complex potentials.
  std::vector<cplx> f(pts.size()), u_on(pts.size()), u_off(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    f[j] = on.incident(pts[j]).real();
    u_on[j] = on.total(pts[j]).value.real();
    u_off[j] = off.total(pts[j]).value.real();
  }

  QuasistaticRun run;
  auto& rep = run.report;
  const double inc = workbench::l2_circle_norm(f, w);
  const double d_on = workbench::l2_circle_discrepancy(u_on, f, w);
  const double d_off = workbench::l2_circle_discrepancy(u_off, f, w);
  rep.rel_inc = inc > 0.0 ? d_on / inc : 0.0;
  rep.rel_scat = d_off > 0.0 ? d_on / d_off : 0.0;

  // Quiet zone: boundary of the physical preimage of B_{alpha*}(delta*).
  const auto qz = circle_samples(spec.alpha, config.measurement_points);
  double qz_max = 0.0, f_max = 0.0;
  for (cplx p : qz) {
    const cplx s = cplx{spec.delta, 0.0} + p;
    qz_max = std::max(qz_max, std::abs(on.driving(s).real()));
    f_max = std::max(f_max, std::abs(on.incident(s).real()));
  }
  rep.quiet_zone_max = qz_max;
  rep.config = config.echo();
  rep.metrics.set("experiment", std::string("quasistatic"));
  rep.metrics.set("incident_norm", inc);
  rep.metrics.set("discrepancy_on", d_on);
  rep.metrics.set("discrepancy_off", d_off);
  rep.metrics.set("quiet_zone_incident_max", f_max);
  rep.metrics.set("quiet_zone_relative", f_max > 0.0 ? qz_max / f_max : 0.0);

  if (request.grid_off) run.grid_off = sample_scene(off, config);
  if (request.grid_on) run.grid_on = sample_scene(on, config);
  if (request.contours) {
    const int n = config.n;
    const double ds = config.delta_star;
    const auto hg = workbench::sample_grid(
        [n, ds](double x, double y) -> workbench::Sample {
          const cplx s{x, y};
          if (s == cplx{}) return {cplx{}, workbench::Mask::singular};
          return {hermite_h(1.0 / s, n, ds), workbench::Mask::none};
        },
        config.window, config.nx, config.ny);
    const auto mag = workbench::magnitude(hg);
    run.device_contour = workbench::contour_levelset(mag, config.device_level, workbench::EdgeInterpolation::log);
    run.quiet_contour = workbench::contour_levelset(mag, config.quiet_level, workbench::EdgeInterpolation::log);
    rep.metrics.set("device_contour.polylines", run.device_contour.polylines.size());
    rep.metrics.set("quiet_contour.polylines", run.quiet_contour.polylines.size());
  }
  return run;
}

workbench::FieldGrid hermite_grid(int n, double delta_star, workbench::Window window, std::size_t nx,
                                  std::size_t ny) {
  return workbench::sample_grid(
      [n, delta_star](double x, double y) -> workbench::Sample {
        return {hermite_h({x, y}, n, delta_star), workbench::Mask::none};
      },
      window, nx, ny);
}

}  // namespace cloak::quasistatic
