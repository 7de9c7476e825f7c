// cloakbench: runs the cloaking experiments and writes plot-ready CSV plus
// a key-value report.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cloak/helmholtz_experiment.hpp"
#include "cloak/quasistatic_experiment.hpp"
#include "cloak/simd/kernels.hpp"
#include "cloak/specfun.hpp"
#include "cloak/workbench/config.hpp"
#include "cloak/workbench/contour.hpp"
#include "cloak/workbench/experiment_config.hpp"
#include "cloak/workbench/report.hpp"

namespace fs = std::filesystem;
using namespace cloak;
using workbench::FlatConfig;
using workbench::KeyValues;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitFailure = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  bool defaults = false;
  std::string out = ".";
  bool devices_on = false;
  bool devices_off = false;
  std::vector<std::size_t> grid;
  std::vector<double> window;
  int n = -1;
  int big_n = -1;
  double tau_a = -1.0;
  double tau_b = -1.0;
  bool no_grid = false;
};

/// Output files are collected in memory and written only after every
/// computation succeeded.
class OutputSet {
 public:
  void add(const std::string& name, std::string contents) { files_[name] = std::move(contents); }
  void write(const fs::path& dir) const {
    fs::create_directories(dir);
    for (const auto& [name, text] : files_) workbench::write_text_file(dir / name, text);
  }
  const std::map<std::string, std::string>& files() const { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

FlatConfig load_config(const CommonOptions& o) {
  if (o.defaults && !o.config_path.empty()) throw UsageError("--defaults and --config are mutually exclusive");
  if (!o.defaults && o.config_path.empty()) throw UsageError("either --config PATH or --defaults is required");
  if (o.defaults) return FlatConfig{};
  if (!fs::is_regular_file(o.config_path)) throw UsageError("config file not found: " + o.config_path);
  return FlatConfig::load(o.config_path);
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

std::string grid_text(const workbench::FieldGrid& g) {
  return render([&](std::ostream& os) { workbench::write_grid_csv(os, g); });
}
std::string contour_text(const workbench::ContourSet& c) {
  return render([&](std::ostream& os) { workbench::write_contour_csv(os, c); });
}
std::string report_text(const KeyValues& kv) {
  return render([&](std::ostream& os) { workbench::write_report(os, kv); });
}

void apply_grid_flags(const CommonOptions& o, std::size_t& nx, std::size_t& ny, workbench::Window& w) {
  if (!o.grid.empty()) {
    nx = o.grid[0];
    ny = o.grid[1];
  }
  if (!o.window.empty()) w = {o.window[0], o.window[1], o.window[2], o.window[3]};
}

quasistatic::QuasistaticExperimentConfig quasistatic_from(const CommonOptions& o, const FlatConfig& cfg,
                                                          const std::string& prefix = "") {
  auto c = workbench::quasistatic_config(cfg, prefix);
  if (o.n > 0) c.n = o.n;
  apply_grid_flags(o, c.nx, c.ny, c.window);
  return c;
}

helmholtz::HelmholtzExperimentConfig helmholtz_from(const CommonOptions& o, const FlatConfig& cfg,
                                                    const std::string& prefix = "") {
  auto c = workbench::helmholtz_config(cfg, prefix);
  if (o.big_n >= 0) c.cloak.order = o.big_n;
  if (o.tau_a > 0.0) c.cloak.tau_a = o.tau_a;
  if (o.tau_b > 0.0) c.cloak.tau_b = o.tau_b;
  apply_grid_flags(o, c.nx, c.ny, c.window_lambda);
  return c;
}

bool want_off(const CommonOptions& o) { return !o.no_grid && (o.devices_off || !o.devices_on); }
bool want_on(const CommonOptions& o) { return !o.no_grid && (o.devices_on || !o.devices_off); }

void print_summary(const std::string& title, const workbench::DiscrepancyReport& r) {
  std::cout << title << ": rel_inc = " << workbench::format_double(r.rel_inc)
            << "  rel_scat = " << workbench::format_double(r.rel_scat)
            << "  quiet_zone_max = " << workbench::format_double(r.quiet_zone_max) << '\n';
}

int run_quasistatic(const CommonOptions& o) {
  const FlatConfig cfg = load_config(o);
  const auto c = quasistatic_from(o, cfg);
  cfg.reject_unused();
  const auto run = quasistatic::run_quasistatic_experiment(c, {want_off(o), want_on(o), true});
  OutputSet out;
  if (run.grid_off) out.add("quasistatic_off.csv", grid_text(*run.grid_off));
  if (run.grid_on) out.add("quasistatic_on.csv", grid_text(*run.grid_on));
  out.add("quasistatic_device_contour.csv", contour_text(run.device_contour));
  out.add("quasistatic_quiet_contour.csv", contour_text(run.quiet_contour));
  out.add("quasistatic_report.txt", report_text(run.report.to_key_values()));
  out.write(o.out);
  print_summary("quasistatic", run.report);
  return 0;
}

int run_helmholtz(const CommonOptions& o) {
  const FlatConfig cfg = load_config(o);
  const auto c = helmholtz_from(o, cfg);
  cfg.reject_unused();
  const auto run = helmholtz::run_helmholtz_experiment(c, {want_off(o), want_on(o), !o.no_grid});
  OutputSet out;
  if (run.grid_off) out.add("helmholtz_off.csv", grid_text(*run.grid_off));
  if (run.grid_on) out.add("helmholtz_on.csv", grid_text(*run.grid_on));
  if (!o.no_grid) out.add("helmholtz_device_contour.csv", contour_text(run.device_contour));
  out.add("helmholtz_coefficients.csv",
          render([&](std::ostream& os) { helmholtz::write_coefficients(os, run.solution.devices); }));
  out.add("helmholtz_report.txt", report_text(run.report.to_key_values()));
  out.write(o.out);
  print_summary("helmholtz", run.report);
  return 0;
}

struct LevelsetOptions {
  std::string input;
  std::vector<double> levels;
};

int run_levelset(const CommonOptions& o, const LevelsetOptions& lo) {
  OutputSet out;
  KeyValues kv;
  if (!lo.input.empty()) {
    if (lo.levels.empty()) throw UsageError("--input needs at least one --level");
    std::ifstream in(lo.input);
    if (!in) throw UsageError("grid file not found: " + lo.input);
    const auto grid = workbench::read_grid_csv(in);
    const auto mag = workbench::magnitude(grid);
    kv.set("input", lo.input);
    for (std::size_t i = 0; i < lo.levels.size(); ++i) {
      const auto cs = workbench::contour_levelset(mag, lo.levels[i], workbench::EdgeInterpolation::log);
      out.add("levelset_contour_" + std::to_string(i) + ".csv", contour_text(cs));
      kv.set("contour_" + std::to_string(i) + ".level", lo.levels[i]);
      kv.set("contour_" + std::to_string(i) + ".polylines", cs.polylines.size());
    }
  } else {
    const FlatConfig cfg = load_config(o);
    int n = cfg.get_int("n", 10);
    if (o.n > 0) n = o.n;
    const double ds = cfg.get_double("delta_star", 1.0);
    auto w = cfg.get_double_list("window");
    if (w.empty()) w = {-0.5, 1.5, -1.0, 1.0};
    if (w.size() != 4) throw cfg.error("window", "'window' needs 4 numbers");
    workbench::Window window{w[0], w[1], w[2], w[3]};
    auto g = cfg.get_double_list("grid");
    if (g.empty()) g = {301, 301};
    if (g.size() != 2) throw cfg.error("grid", "'grid' needs 2 numbers");
    std::size_t nx = static_cast<std::size_t>(g[0]), ny = static_cast<std::size_t>(g[1]);
    auto levels = cfg.get_double_list("levels");
    if (!lo.levels.empty()) levels = lo.levels;
    if (levels.empty()) levels = {0.01, 100.0};
    cfg.reject_unused();
    apply_grid_flags(o, nx, ny, window);
    if (!window.valid() || nx < 2 || ny < 2) throw UsageError("grid needs a valid window and nx, ny >= 2");
    const auto grid = quasistatic::hermite_grid(n, ds, window, nx, ny);
    out.add("levelset_grid.csv", grid_text(grid));
    const auto mag = workbench::magnitude(grid);
    kv.set("n", n);
    kv.set("delta_star", ds);
    kv.set("window.x_min", window.x_min);
    kv.set("window.x_max", window.x_max);
    kv.set("window.y_min", window.y_min);
    kv.set("window.y_max", window.y_max);
    kv.set("grid.nx", nx);
    kv.set("grid.ny", ny);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto cs = workbench::contour_levelset(mag, levels[i], workbench::EdgeInterpolation::log);
      out.add("levelset_contour_" + std::to_string(i) + ".csv", contour_text(cs));
      kv.set("contour_" + std::to_string(i) + ".level", levels[i]);
      kv.set("contour_" + std::to_string(i) + ".polylines", cs.polylines.size());
    }
  }
  out.add("levelset_report.txt", report_text(kv));
  out.write(o.out);
  std::cout << "levelset: wrote " << out.files().size() << " files\n";
  return 0;
}

int run_specfun_check(const CommonOptions& o) {
  KeyValues kv;
  bool ok = true;
  auto record = [&](const std::string& name, double err, double tol) {
    const bool pass = err <= tol;
    ok = ok && pass;
    kv.set(name + ".max_error", err);
    kv.set(name + ".tolerance", tol);
    kv.set(name + ".pass", pass);
    std::cout << (pass ? "PASS " : "FAIL ") << name << " max_error=" << workbench::format_double(err) << '\n';
  };

  double wr = 0.0;
  for (double x : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
    for (int n = 0; n <= 10; ++n) {
      const double w = specfun::bessel_j(n + 1, x) * specfun::bessel_y(n, x) -
                       specfun::bessel_j(n, x) * specfun::bessel_y(n + 1, x);
      const double ref = 2.0 / (std::numbers::pi * x);
      wr = std::max(wr, std::abs(w - ref) / ref);
    }
  }
  record("wronskian", wr, 1e-9);

  double rec = 0.0;
  for (double x : {5.0, 20.0, 60.0, 150.0, 400.0}) {
    std::vector<double> j(82);
    specfun::bessel_jy_sequence(81, x, j, {});
    double jmax = 0.0;
    for (double v : j) jmax = std::max(jmax, std::abs(v));
    for (int n = 1; n <= 80 && n <= x; ++n) rec = std::max(rec, std::abs(j[n - 1] + j[n + 1] - 2.0 * n / x * j[n]) / jmax);
  }
  record("recurrence", rec, 1e-9);

  double par = 0.0;
  for (double x : {0.3, 1.7, 9.0, 42.0}) {
    for (int n = 1; n <= 40; ++n) {
      const double s = (n & 1) ? -1.0 : 1.0;
      par = std::max(par, std::abs(specfun::bessel_j(-n, x) - s * specfun::bessel_j(n, x)));
      par = std::max(par, std::abs(specfun::bessel_y(-n, x) - s * specfun::bessel_y(n, x)) /
                              std::max(1.0, std::abs(specfun::bessel_y(n, x))));
    }
  }
  record("parity", par, 0.0);

  double cb = 0.0;
  for (int k = 0; k < 33; ++k) {
    const auto a = specfun::central_binomial_exact(k), b = specfun::central_binomial_exact(k + 1);
    cb = std::max(cb, std::abs(static_cast<double>(b * static_cast<std::uint64_t>(k + 1)) -
                               static_cast<double>(a * static_cast<std::uint64_t>(4 * k + 2))));
  }
  record("central_binomial_ratio", cb, 0.0);
  kv.set("simd_backend", std::string(simd::backend_name(simd::active().backend)));

  OutputSet out;
  out.add("specfun_check.txt", report_text(kv));
  out.write(o.out);
  return ok ? 0 : kExitFailure;
}

int run_report(const CommonOptions& o) {
  const FlatConfig cfg = load_config(o);
  const auto qc = quasistatic_from(o, cfg, "quasistatic.");
  const auto hc = helmholtz_from(o, cfg, "helmholtz.");
  cfg.reject_unused();
  const auto q = quasistatic::run_quasistatic_experiment(qc, {false, false, false});
  const auto h = helmholtz::run_helmholtz_experiment(hc, {false, false, false});
  KeyValues kv;
  kv.append(q.report.to_key_values(), "quasistatic.");
  kv.append(h.report.to_key_values(), "helmholtz.");
  OutputSet out;
  out.add("report.txt", report_text(kv));
  out.write(o.out);
  print_summary("quasistatic", q.report);
  print_summary("helmholtz", h.report);
  return 0;
}

void add_common(CLI::App* sub, CommonOptions& o, bool experiment) {
  sub->add_option("--config", o.config_path, "Flat key = value configuration file");
  sub->add_flag("--defaults", o.defaults, "Use built-in defaults for every parameter");
  sub->add_option("--out", o.out, "Output directory");
  if (!experiment) return;
  sub->add_flag("--devices-on", o.devices_on, "Export only the active-device grid");
  sub->add_flag("--devices-off", o.devices_off, "Export only the inactive-device grid");
  sub->add_option("--grid", o.grid, "Grid sample counts NX NY")->expected(2);
  sub->add_option("--window", o.window, "Window XMIN XMAX YMIN YMAX")->expected(4);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active exterior cloaking workbench"};
  app.require_subcommand(1, 1);
  CommonOptions o;
  LevelsetOptions lo;

  auto* qs = app.add_subcommand("quasistatic", "Near-resonant disk with the Hermite-polynomial device");
  add_common(qs, o, true);
  qs->add_option("--n", o.n, "Hermite degree parameter n")->check(CLI::PositiveNumber);

  auto* hz = app.add_subcommand("helmholtz", "Kite obstacle with the multi-device Helmholtz cloak");
  add_common(hz, o, true);
  hz->add_option("--N", o.big_n, "Ansatz order N per device")->check(CLI::NonNegativeNumber);
  hz->add_option("--tauA", o.tau_a, "Relative singular-value cutoff for A");
  hz->add_option("--tauB", o.tau_b, "Relative singular-value cutoff for B N_A");
  hz->add_flag("--no-grid", o.no_grid, "Skip grid sampling and contours");

  auto* ls = app.add_subcommand("levelset", "Level sets of |h(z)|, or of an existing grid via --input");
  add_common(ls, o, false);
  ls->add_option("--grid", o.grid, "Grid sample counts NX NY")->expected(2);
  ls->add_option("--window", o.window, "Window XMIN XMAX YMIN YMAX")->expected(4);
  ls->add_option("--n", o.n, "Hermite degree parameter n")->check(CLI::PositiveNumber);
  ls->add_option("--input", lo.input, "Grid CSV to contour by magnitude");
  ls->add_option("--level", lo.levels, "Contour level (repeatable)");

  auto* sf = app.add_subcommand("specfun-check", "Bessel identity checks");
  sf->add_option("--out", o.out, "Output directory");

  auto* rp = app.add_subcommand("report", "Metrics of both experiments without grids");
  add_common(rp, o, false);
  rp->add_option("--n", o.n, "Hermite degree parameter n")->check(CLI::PositiveNumber);
  rp->add_option("--N", o.big_n, "Ansatz order N per device")->check(CLI::NonNegativeNumber);
  rp->add_option("--tauA", o.tau_a, "Relative singular-value cutoff for A");
  rp->add_option("--tauB", o.tau_b, "Relative singular-value cutoff for B N_A");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (o.grid.size() == 2 && (o.grid[0] < 2 || o.grid[1] < 2)) throw UsageError("--grid needs NX, NY >= 2");
    if (*qs) return run_quasistatic(o);
    if (*hz) return run_helmholtz(o);
    if (*ls) return run_levelset(o, lo);
    if (*sf) return run_specfun_check(o);
    if (*rp) return run_report(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const workbench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
