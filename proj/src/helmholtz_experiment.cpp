#include "cloak/helmholtz_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace cloak::helmholtz {

bie::ParamCurve HelmholtzExperimentConfig::kite() const {
  const double lam = cloak.wavelength();
  return bie::ParamCurve::kite(kite_scale_lambda * lam, lam * kite_center_lambda);
}

workbench::Window HelmholtzExperimentConfig::window() const {
  const double lam = cloak.wavelength();
  return {window_lambda.x_min * lam, window_lambda.x_max * lam, window_lambda.y_min * lam, window_lambda.y_max * lam};
}

void HelmholtzExperimentConfig::validate() const {
  cloak.validate();
  if (obstacle) {
    if (!(kite_scale_lambda > 0.0)) throw std::invalid_argument("kite scale must be positive");
    if (nystrom_q < 2) throw std::invalid_argument("nystrom_q must be >= 2");
    // The kite spans x in [-1.3, 1] and |y| <= 1.5 times its scale.
    const double reach = norm(kite_center_lambda) + 1.65 * kite_scale_lambda;
    if (!(reach < cloak.alpha_lambda)) throw std::invalid_argument("obstacle must lie inside the cloaked disk");
  }
  if (measurement_points < 1) throw std::invalid_argument("measurement_points must be positive");
  if (!window_lambda.valid() || nx < 2 || ny < 2) throw std::invalid_argument("grid needs a valid window and nx, ny >= 2");
  if (!(device_level > 0.0)) throw std::invalid_argument("device contour level must be positive");
}

workbench::KeyValues HelmholtzExperimentConfig::echo() const {
  workbench::KeyValues kv;
  kv.set("k", cloak.k);
  kv.set("wavelength", cloak.wavelength());
  kv.set("alpha_lambda", cloak.alpha_lambda);
  kv.set("delta_lambda", cloak.delta_lambda);
  kv.set("gamma_lambda", cloak.gamma_lambda);
  kv.set("devices", cloak.devices);
  kv.set("N", cloak.order);
  kv.set("coefficients_per_device", cloak.coefficients_per_device());
  kv.set("alpha_spacing_lambda", cloak.alpha_spacing_lambda);
  kv.set("gamma_spacing_lambda", cloak.gamma_spacing_lambda);
  kv.set("tauA", cloak.tau_a);
  kv.set("tauB", cloak.tau_b);
  std::string angles;
  for (double a : cloak.resolved_device_angles()) {
    if (!angles.empty()) angles += ' ';
    angles += workbench::format_double(a);
  }
  kv.set("device_angles", angles);
  kv.set("incident_angle", cloak.incident_angle);
  kv.set("obstacle", obstacle ? std::string("kite") : std::string("none"));
  kv.set("kite_scale_lambda", kite_scale_lambda);
  kv.set("kite_center_x_lambda", kite_center_lambda.x);
  kv.set("kite_center_y_lambda", kite_center_lambda.y);
  kv.set("nystrom_q", nystrom_q);
  kv.set("measurement_points", measurement_points);
  kv.set("window.x_min_lambda", window_lambda.x_min);
  kv.set("window.x_max_lambda", window_lambda.x_max);
  kv.set("window.y_min_lambda", window_lambda.y_min);
  kv.set("window.y_max_lambda", window_lambda.y_max);
  kv.set("grid.nx", nx);
  kv.set("grid.ny", ny);
  kv.set("device_level", device_level);
  return kv;
}

HelmholtzScene::HelmholtzScene(const HelmholtzExperimentConfig& config, const CloakSolution& solution,
                               bool devices_on)
    : k_(config.cloak.k), d_(config.cloak.direction()), on_(devices_on), devices_(&solution.devices) {
  if (!config.obstacle) return;
  const auto curve = config.kite();
  const auto pts = bie::nodes(curve, config.nystrom_q);
  std::vector<cplx> trace(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    trace[j] = incident(pts[j].pos);
    if (on_) trace[j] += devices(pts[j].pos);
  }
  obstacle_ = bie::assemble_and_solve_cfie(curve, k_, trace, config.nystrom_q);
}

cplx HelmholtzScene::devices(Vec2 x) const { return device_field(x, *devices_, k_); }

cplx HelmholtzScene::scattered(Vec2 x) const { return obstacle_ ? bie::scattered_eval(*obstacle_, x) : cplx{}; }

workbench::Sample HelmholtzScene::total(Vec2 x) const {
  if (obstacle_ && obstacle_->inside(x)) return {cplx{}, workbench::Mask::interior};
  cplx u = incident(x);
  if (on_) {
    for (const Vec2& p : devices_->positions)
      if (x == p) return {cplx{}, workbench::Mask::singular};
    u += devices(x);
  }
  u += scattered(x);
  const bool near = obstacle_ && obstacle_->near_boundary(x);
  return {u, near ? workbench::Mask::near_boundary : workbench::Mask::none};
}

HelmholtzRun run_helmholtz_experiment(const HelmholtzExperimentConfig& config, const HelmholtzRequest& request) {
  config.validate();
  HelmholtzRun run;
  run.solution = solve_cloak(config.cloak);
  const HelmholtzScene on(config, run.solution, true);
  const HelmholtzScene off(config, run.solution, false);

  const auto circle = measurement_circle(config.cloak.gamma(), config.measurement_points);
  const std::vector<double> w(circle.points.size(), circle.weight);
  const std::size_t m = circle.points.size();
  std::vector<cplx> ui(m), u_on(m), u_off(m), ud(m);
  workbench::parallel_for(m, 0, [&](std::size_t j) {
    const Vec2 x = circle.points[j];
    ui[j] = on.incident(x);
    ud[j] = on.devices(x);
    u_on[j] = ui[j] + ud[j] + on.scattered(x);
    u_off[j] = ui[j] + off.scattered(x);
  });
  const double inc = workbench::l2_circle_norm(ui, w);
  const double d_on = workbench::l2_circle_discrepancy(u_on, ui, w);
  const double d_off = workbench::l2_circle_discrepancy(u_off, ui, w);
  const double leak = workbench::l2_circle_norm(ud, w);

  const auto qz = measurement_circle(config.cloak.alpha(), config.measurement_points);
  double qz_max = 0.0, ui_max = 0.0;
  for (const Vec2& x : qz.points) {
    const cplx a = on.incident(x);
    qz_max = std::max(qz_max, std::abs(a + on.devices(x)));
    ui_max = std::max(ui_max, std::abs(a));
  }

  auto& rep = run.report;
  rep.rel_inc = inc > 0.0 ? d_on / inc : 0.0;
  rep.rel_scat = d_off > 0.0 ? d_on / d_off : 0.0;
  rep.quiet_zone_max = qz_max;
  rep.config = config.echo();
  const auto& s = run.solution.solve;
  rep.metrics.set("experiment", std::string("helmholtz"));
  rep.metrics.set("incident_norm", inc);
  rep.metrics.set("discrepancy_on", d_on);
  rep.metrics.set("discrepancy_off", d_off);
  rep.metrics.set("device_leakage_relative", inc > 0.0 ? leak / inc : 0.0);
  rep.metrics.set("quiet_zone_incident_max", ui_max);
  rep.metrics.set("quiet_zone_relative", ui_max > 0.0 ? qz_max / ui_max : 0.0);
  rep.metrics.set("solve.quiet_zone_residual", run.solution.quiet_zone_residual);
  rep.metrics.set("solve.exterior_leakage", run.solution.exterior_leakage);
  rep.metrics.set("solve.first_residual", s.first_residual);
  rep.metrics.set("solve.first_residual_step1", s.first_residual_step1);
  rep.metrics.set("solve.second_objective", s.second_objective);
  rep.metrics.set("solve.second_objective_step1", s.second_objective_step1);
  rep.metrics.set("solve.solution_norm", s.solution_norm);
  rep.metrics.set("solve.correction_norm", s.correction_norm);
  rep.metrics.set("solve.sigma_max_a", s.sigma_max_a);
  rep.metrics.set("solve.sigma_max_bn", s.sigma_max_bn);
  rep.metrics.set("solve.rank_a", s.rank_a);
  rep.metrics.set("solve.rank_bn", s.rank_bn);
  rep.metrics.set("solve.nullspace_dim", s.nullspace_dim);
  for (const auto& [name, radius, spacing] :
       {std::tuple{"alpha", config.cloak.alpha(), config.cloak.alpha_spacing()},
        std::tuple{"gamma", config.cloak.gamma(), config.cloak.gamma_spacing()}}) {
    if (control_points(radius, spacing).degenerate)
      rep.metrics.set(std::string("warning.") + name + "_control_points", std::string("spacing exceeds circumference"));
  }
  if (on.obstacle()) {
    rep.metrics.set("obstacle.residual_on", on.obstacle()->residual);
    rep.metrics.set("obstacle.residual_off", off.obstacle()->residual);
  }

  const auto window = config.window();
  if (request.grid_off)
    run.grid_off = workbench::sample_grid([&](double x, double y) { return off.total({x, y}); }, window, config.nx,
                                          config.ny);
  if (request.grid_on)
    run.grid_on = workbench::sample_grid([&](double x, double y) { return on.total({x, y}); }, window, config.nx,
                                         config.ny);
  if (request.contours) {
    const auto ud_grid = workbench::sample_grid(
        [&](double x, double y) -> workbench::Sample {
          for (const Vec2& p : run.solution.devices.positions)
            if (Vec2{x, y} == p) return {cplx{}, workbench::Mask::singular};
          return {on.devices({x, y}), workbench::Mask::none};
        },
        window, config.nx, config.ny);
    run.device_contour =
        workbench::contour_levelset(workbench::magnitude(ud_grid), config.device_level, workbench::EdgeInterpolation::log);
    rep.metrics.set("device_contour.polylines", run.device_contour.polylines.size());
  }
  return run;
}

}  // namespace cloak::helmholtz
