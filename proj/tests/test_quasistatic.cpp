#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cloak/quasistatic.hpp"
#include "cloak/quasistatic_experiment.hpp"

using namespace cloak::quasistatic;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLobe = 1.0 / (2.0 + 2.0 * std::numbers::sqrt2);

std::vector<cplx> random_disk_points(std::size_t count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<cplx> z;
  while (z.size() < count) {
    const cplx p{u(rng), u(rng)};
    if (std::abs(p) <= radius) z.push_back(p);
  }
  return z;
}

// Points with 4|z^2 - z| in [lo, hi] for delta* = 1, optionally restricted to one side.
std::vector<cplx> lemniscate_band(std::size_t count, double lo, double hi, int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-1.0, 2.0), uy(-1.5, 1.5);
  std::vector<cplx> z;
  while (z.size() < count) {
    const cplx p{ux(rng), uy(rng)};
    const double r = 4.0 * std::abs(p * p - p);
    if (r < lo || r > hi) continue;
    if (side < 0 && p.real() >= 0.5) continue;
    if (side > 0 && p.real() <= 0.5) continue;
    z.push_back(p);
  }
  return z;
}

}  // namespace

TEST_CASE("star parameters") {
  const auto p = star_params(1.0, 2.0);
  CHECK(p.alpha_star == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.delta_star == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto z = star_params(0.0, 4.0);
  CHECK(z.alpha_star == 0.0);
  CHECK(z.delta_star == 0.25);
  for (auto [a, d] : {std::pair{0.1, 1.0}, {0.3, 0.5}, {2.0, 7.0}}) {
    const auto s = star_params(a, d);
    const double back = s.delta_star / (s.delta_star * s.delta_star - s.alpha_star * s.alpha_star);
    CHECK(std::abs(back / d - 1.0) <= 1e-12);
    const auto u = unstar_params(s.alpha_star, s.delta_star);
    CHECK(std::abs(u.alpha_star / a - 1.0) <= 1e-12);
  }
  CHECK(lobe_radius(1.0) == doctest::Approx(0.2071067812).epsilon(1e-10));
  CHECK(lobe_radius(1.0) > 0.2);
  CHECK_THROWS_AS(star_params(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("cloak spec validation and regime") {
  CHECK_THROWS(HermiteCloakSpec::make(1.0, 0.5, 5.0, 4));
  CHECK_THROWS(HermiteCloakSpec::make(0.1, 1.0, 1.0, 4));
  CHECK_THROWS(HermiteCloakSpec::make(0.1, 1.0, 5.0, 0));
  const auto s = HermiteCloakSpec::from_star(0.2, 1.0, 5.0, 10);
  CHECK(s.delta == doctest::Approx(1.0 / 0.96).epsilon(1e-14));
  CHECK(s.alpha == doctest::Approx(0.2 / 0.96).epsilon(1e-14));
  CHECK(s.cloaking_regime());
  CHECK_FALSE(HermiteCloakSpec::from_star(0.2, 1.0, 4.5, 10).cloaking_regime());
  CHECK_FALSE(HermiteCloakSpec::from_star(0.21, 1.0, 5.0, 10).cloaking_regime());
}

TEST_CASE("hermite_h for n = 2 equals (1 - z)^2 (1 + 2z)") {
  for (auto form : {HermiteForm::product_sum, HermiteForm::binomial, HermiteForm::central}) {
    CHECK(std::abs(hermite_h(0.5, 2, 1.0, form) - 0.5) <= 1e-15);
    for (cplx z : random_disk_points(20, 2.0, 1)) {
      const cplx ref = (1.0 - z) * (1.0 - z) * (1.0 + 2.0 * z);
      CHECK(std::abs(hermite_h(z, 2, 1.0, form) - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("hermite_h at the symmetric point is one half") {
  for (double ds : {1.0, 0.37, 5.0}) {
    for (int n = 1; n <= 30; ++n) CHECK(std::abs(hermite_h(0.5 * ds, n, ds) - 0.5) <= 1e-14);
  }
}

TEST_CASE("interpolation, symmetry and form agreement for n = 1..30") {
  const auto zs = random_disk_points(200, 2.0, 2);
  for (int n = 1; n <= 30; ++n) {
    CHECK(std::abs(hermite_h(0.0, n, 1.0) - 1.0) <= 1e-12);
    CHECK(std::abs(hermite_h(1.0, n, 1.0)) <= 1e-12);
    for (cplx z : zs) {
      const cplx a = hermite_h(z, n, 1.0, HermiteForm::central);
      const cplx b = hermite_h(z, n, 1.0, HermiteForm::binomial);
      const cplx c = hermite_h(z, n, 1.0, HermiteForm::product_sum);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      CHECK(std::abs(a - b) <= 1e-10 * scale);
      CHECK(std::abs(a - c) <= 1e-10 * scale);
      CHECK(std::abs(b - c) <= 1e-10 * scale);
      const cplx sym = hermite_h(1.0 - z, n, 1.0) + a - 1.0;
      CHECK(std::abs(sym) <= 1e-11 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("forms agree in relative terms near delta* and just outside the lobes") {
  for (double ds : {1.0, 0.37}) {
    std::vector<cplx> zs{cplx{-0.215, -0.08} * ds, cplx{1.14, -0.105} * ds};
    // For delta* != 1 rounding z / delta* perturbs 1 - w by eps / rho, so rho stays >= 1e-3.
    for (double rho : {ds == 1.0 ? 1e-6 : 1e-3, 1e-3, 0.05, 0.2})
      for (int m = 0; m < 8; ++m) zs.push_back(ds * (1.0 + rho * std::polar(1.0, 0.3 + 2.0 * std::numbers::pi * m / 8)));
    for (int n : {10, 23, 30}) {
      for (cplx z : zs) {
        const cplx a = hermite_h(z, n, ds, HermiteForm::central);
        const cplx b = hermite_h(z, n, ds, HermiteForm::binomial);
        const cplx c = hermite_h(z, n, ds, HermiteForm::product_sum);
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
        CHECK(std::abs(a - b) <= 1e-10 * scale);
        CHECK(std::abs(a - c) <= 1e-10 * scale);
        CHECK(std::abs(b - c) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("batch evaluation matches the scalar central form near delta*") {
  std::vector<cplx> zs;
  for (int m = 0; m < 16; ++m) zs.push_back(1.0 + 0.01 * (m + 1) * std::polar(1.0, 0.7 * m));
  std::vector<cplx> out(zs.size());
  hermite_h_batch(zs, out, 20, 1.0);
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(std::abs(out[i] - hermite_h(zs[i], 20, 1.0)) <= 1e-14 * std::abs(out[i]));
}

TEST_CASE("derivatives of orders 1..n-1 vanish at both nodes") {
  // Cauchy coefficients c_j on a circle of radius r: h^{(j)}(z0) r^j / j! = c_j r^j.
  const double r = 0.25;
  for (int n : {2, 5, 10, 20}) {
    for (double z0 : {0.0, 1.0}) {
      const auto c = taylor_coeffs([n](cplx z) { return hermite_h(z, n, 1.0); }, z0, r, n, 128);
      for (int j = 1; j < n; ++j) CHECK(std::abs(c[j]) * std::pow(r, j) <= 1e-8);
      // Order n does not vanish.
      CHECK(std::abs(c[n]) * std::pow(r, n) > 1e-6 * std::pow(r, n));
    }
  }
}

TEST_CASE("W equals 1 - h") {
  for (cplx z : random_disk_points(40, 1.2, 3)) {
    for (int n : {1, 4, 13}) CHECK(std::abs(hermite_w(z, n, 1.0) - (1.0 - hermite_h(z, n, 1.0))) <= 1e-12 * std::max(1.0, std::abs(hermite_h(z, n, 1.0))));
  }
}

TEST_CASE("degree guard") {
  CHECK_THROWS_AS(hermite_h(0.1, 501, 1.0), std::overflow_error);
  CHECK_NOTHROW(hermite_h(0.1, 500, 1.0));
  CHECK_THROWS_AS(hermite_h(0.1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite_h(0.1, 3, 0.0), std::invalid_argument);
}

TEST_CASE("convergence dichotomy") {
  // |h_n - 1| = |W_n(z)| and |h_n(z)| = |W_n(1 - z)|, both without cancellation.
  for (int side : {-1, 1}) {
    for (cplx z : lemniscate_band(20, 0.2, 0.8, side, side < 0 ? 4 : 5)) {
      const cplx p = side < 0 ? z : 1.0 - z;
      double prev = std::abs(hermite_w(p, 10, 1.0));
      const double first = prev;
      for (int n = 15; n <= 40; n += 5) {
        const double e = std::abs(hermite_w(p, n, 1.0));
        CHECK(e < prev);
        prev = e;
      }
      // Geometric rate bounded by the lemniscate ratio 4|z^2 - z| < 1.
      const double rate = std::pow(prev / first, 1.0 / 30.0);
      CHECK(rate < 1.0);
      CHECK(rate <= 4.0 * std::abs(z * z - z) * 1.2);
    }
  }
  for (cplx z : lemniscate_band(20, 1.6, 12.0, 0, 6)) {
    if (std::abs(z) > 2.0) continue;
    double m = 0.0;
    for (int n = 1; n <= 60; ++n) m = std::max(m, std::abs(hermite_h(z, n, 1.0)));
    CHECK(m > 1e6);
  }
}

TEST_CASE("figure-eight classification") {
  CHECK(in_figure_eight(0.5, 1.0) == LobeRegion::boundary);
  CHECK(in_figure_eight(0.1, 1.0) == LobeRegion::left_lobe);
  CHECK(in_figure_eight(0.9, 1.0) == LobeRegion::right_lobe);
  CHECK(in_figure_eight(cplx(0.5, 1.0), 1.0) == LobeRegion::outside);
  CHECK(in_figure_eight(-0.5, 1.0) == LobeRegion::outside);
  CHECK(in_figure_eight(1.5, 2.0) == LobeRegion::right_lobe);
}

TEST_CASE("device potential examples") {
  const auto spec = HermiteCloakSpec::make(0.1, 1.0, 5.0, 2);
  auto s2 = spec;
  s2.delta_star = 1.0;
  const auto f = IncidentPolynomial::identity();
  for (cplx z : random_disk_points(20, 2.0, 7)) {
    const cplx ref = -3.0 * z + 2.0 * z * z;
    CHECK(std::abs(device_potential_V(z, s2, f) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(device_potential_V(1.0, s2, f) + 1.0) <= 1e-15);
  CHECK(device_potential_V(0.0, s2, f) == cplx{});
  CHECK(device_potential_V(cplx(0.3, 0.2), s2, IncidentPolynomial{}) == cplx{});
  CHECK(device_potential_V(cplx(0.3, 0.2), s2, IncidentPolynomial{{0.0, 0.0, 0.0}}) == cplx{});
  for (int n = 1; n <= 30; ++n) {
    for (double ds : {1.0, 0.8, 2.5}) {
      auto sp = HermiteCloakSpec::from_star(0.1 * ds, ds, 5.0 / ds + 10.0, n);
      CHECK(std::abs(device_potential_V(ds, sp, f) + 1.0 / ds) <= 1e-12 / ds);
    }
  }
  CHECK_THROWS_AS(device_potential_V(0.5, s2, IncidentPolynomial{{0.0, 0.0, 0.0, 1.0}}), DegreeError);

  // General polynomial: V = -W(z) F(1/z).
  auto s5 = HermiteCloakSpec::from_star(0.2, 1.0, 5.0, 5);
  const IncidentPolynomial g{{cplx(0.5, 0.1), cplx(-1.0, 0.3), cplx(0.0, 2.0), cplx(0.2, 0.0)}};
  for (cplx z : random_disk_points(20, 1.5, 8)) {
    if (std::abs(z) < 0.1) continue;
    const cplx ref = -hermite_w(z, 5, 1.0) * g(1.0 / z);
    CHECK(std::abs(device_potential_V(z, s5, g) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("physical device field") {
  auto spec = HermiteCloakSpec::from_star(0.2, 1.0, 5.0, 2);
  const auto f = IncidentPolynomial::identity();
  CHECK(std::abs(device_field(1.0, spec, f) + 1.0) <= 1e-15);
  CHECK(std::abs(1.0 + device_field(1.0, spec, f)) <= 1e-15);
  CHECK(std::isinf(device_field(0.0, spec, f)));
  for (int n : {2, 6, 10}) {
    spec.n = n;
    CHECK(std::abs(device_potential_s(1e8, spec, f)) <= 1e-7);
    // W(z) = z^n (a0 + a1 z + ...) with a1 / a0 = -n (n - 1) / (n + 1), so
    // |V(1/s)| = c |s|^{1-n} |1 + (a1 / a0) / s| to second order.
    const cplx s1(100.0, 30.0), s2 = 2.0 * s1;
    const double a1 = -n * (n - 1.0) / (n + 1.0);
    const double expected = std::pow(2.0, n - 1) * std::abs(1.0 + a1 / s1) / std::abs(1.0 + a1 / s2);
    const double ratio = std::abs(device_potential_s(s1, spec, f)) / std::abs(device_potential_s(s2, spec, f));
    CHECK(std::abs(ratio / expected - 1.0) <= 2e-3);
    const double far = std::abs(device_potential_s(1e4 * s1, spec, f)) / std::abs(device_potential_s(2e4 * s1, spec, f));
    CHECK(std::abs(far / std::pow(2.0, n - 1) - 1.0) <= 1e-4);
  }
}

TEST_CASE("device cancels the incident field on the cloaked disk") {
  const double ds = 1.0, as = 0.5 * ds * kLobe;
  const auto spec = HermiteCloakSpec::from_star(as, ds, 5.0, 25);
  const auto f = IncidentPolynomial::identity();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const cplx z = ds + as * std::sqrt(ur(rng)) * std::polar(1.0, ut(rng));
    const cplx s = 1.0 / z;
    const double fs = f(s).real();
    CHECK(std::abs(fs + device_field(s, spec, f)) <= 0.02 * std::abs(fs));
  }
}

TEST_CASE("taylor coefficients") {
  const auto a = taylor_coeffs([](cplx s) { return s; }, 1.1, 0.5, 6);
  CHECK(std::abs(a[0] - 1.1) <= 1e-12);
  CHECK(std::abs(a[1] - 1.0) <= 1e-12);
  for (int m = 2; m <= 6; ++m) CHECK(std::abs(a[m]) <= 1e-12);

  const auto b = taylor_coeffs([](cplx s) { return 1.0 / s; }, 1.1, 0.5, 30);
  // Rounding on the contour scales as eps max|g| / radius^m, so compare b_m radius^m.
  for (int m = 0; m <= 30; ++m) {
    const double ref = ((m & 1) ? -1.0 : 1.0) * std::pow(1.1, -m - 1);
    CHECK(std::abs(b[m] - ref) * std::pow(0.5, m) <= 1e-14);
  }

  auto g = [](cplx s) { return std::exp(s) * std::sin(2.0 * s); };
  // Unit radius keeps the eps / radius^m rounding floor below the tolerance.
  const auto c64 = taylor_coeffs(g, cplx(0.3, -0.2), 1.0, 16, 64);
  const auto c128 = taylor_coeffs(g, cplx(0.3, -0.2), 1.0, 16, 128);
  for (int m = 0; m <= 16; ++m) CHECK(std::abs(c64[m] - c128[m]) <= 1e-12);

  CHECK_THROWS_AS(taylor_coeffs([](cplx) { return cplx(NAN, 0.0); }, 1.0, 0.5, 4), std::domain_error);
  CHECK_THROWS_AS(taylor_coeffs([](cplx s) { return s; }, 1.0, 0.5, 40, 100), std::invalid_argument);
}

TEST_CASE("disk scattering") {
  DiskScatterer disk;
  CHECK(disk.reflection() == doctest::Approx(199.0).epsilon(1e-12));
  DiskScatterer plain = disk;
  plain.epsilon = 1.0;
  CHECK(plain.reflection() == 0.0);
  const std::vector<cplx> g{0.7, 1.0, cplx(0.2, 0.1), cplx(-0.05, 0.02)};
  CHECK(disk_scattered_field(g, plain, cplx(2.0, 1.0)) == 0.0);

  // Uniform field: a single dipole rho R^2 / (s - c).
  const std::vector<cplx> u{0.3, 1.0};
  for (double r : {0.5, 2.0, 10.0}) {
    const cplx s = disk.center + std::polar(r, 0.7);
    const cplx v = disk_scattered_potential(u, disk, s);
    CHECK(std::abs(std::abs(v) - 199.0 * 0.04 / r) <= 1e-12 * std::abs(v));
  }
  // Higher multipoles are subleading far away.
  const cplx far = disk.center + std::polar(1e3, 1.1);
  const cplx vf = disk_scattered_potential(g, disk, far);
  CHECK(std::abs(std::abs(vf) - 199.0 * 0.04 / 1e3) <= 199.0 * 0.2 * 0.04 * 0.04 / 1e6 * 2.0);

  CHECK_THROWS_AS(disk_scattered_field(g, disk, disk.center + 0.1), std::domain_error);
  DiskScatterer bad = disk;
  bad.epsilon = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("disk solution satisfies the transmission conditions") {
  const QuasistaticExperimentConfig cfg;
  const QuasistaticScene scene(cfg, true);
  const auto& g = scene.disk_coeffs();
  const DiskScatterer& disk = cfg.disk;
  const double rho = disk.reflection(), R = disk.radius, eps = disk.epsilon;
  const int m_top = disk.series_order;
  double worst_u = 0.0, worst_flux = 0.0, scale_u = 0.0, scale_flux = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double th = 2.0 * kPi * j / 64.0;
    const cplx e = std::polar(1.0, th);
    // Radial derivative of Re f(c + r e^{ith}) is Re f'(.) e^{ith}.
    cplx out{}, out_d{}, in{g[0]}, in_d{};
    for (int m = 1; m <= m_top; ++m) {
      const cplx dm = std::pow(R * e, m);
      const cplx dm1 = std::pow(R * e, m - 1);
      const cplx sc = rho * std::pow(R, 2 * m) * std::conj(g[m]) / dm;
      out += g[m] * dm + sc;
      out_d += double(m) * g[m] * dm1 * e - double(m) * sc / R;
      in += (1.0 + rho) * g[m] * dm;
      in_d += (1.0 + rho) * double(m) * g[m] * dm1 * e;
    }
    const double uo = (g[0] + out).real(), ui = in.real();
    const double fo = out_d.real(), fi = eps * in_d.real();
    worst_u = std::max(worst_u, std::abs(uo - ui));
    worst_flux = std::max(worst_flux, std::abs(fo - fi));
    scale_u = std::max(scale_u, std::abs(uo));
    scale_flux = std::max(scale_flux, std::abs(fo));
    const cplx s = disk.center + R * e * (1.0 + 1e-13);
    CHECK(std::abs(scene.total(s).value.real() - uo) <= 1e-9 * std::max(1.0, std::abs(uo)));
  }
  CHECK(worst_u <= 1e-9 * scale_u);
  CHECK(worst_flux <= 1e-9 * scale_flux);
}

TEST_CASE("no contrast and no device leaves the incident field untouched") {
  QuasistaticExperimentConfig cfg;
  cfg.disk.epsilon = 1.0;
  const QuasistaticScene off(cfg, false);
  for (cplx s : {cplx(2.0, 1.0), cplx(-1.5, 0.2), cplx(0.0, 3.0)}) CHECK(off.total(s).value == s);
  cfg.nx = cfg.ny = 5;
  const auto run = run_quasistatic_experiment(cfg, {false, false, false});
  CHECK(*run.report.metrics.find("discrepancy_off") == "0");
}

TEST_CASE("experiment grid masks the disk interior and the device singularity") {
  QuasistaticExperimentConfig cfg;
  cfg.nx = cfg.ny = 61;
  const auto run = run_quasistatic_experiment(cfg, {true, true, false});
  const auto& on = *run.grid_on;
  const auto& off = *run.grid_off;
  // Node (30, 30) is the origin of the [-3, 3]^2 window.
  CHECK(on.x(30) == 0.0);
  CHECK(on.mask[on.index(30, 30)] == cloak::workbench::Mask::singular);
  CHECK(off.mask[off.index(30, 30)] == cloak::workbench::Mask::none);
  // s = 1.1 lies at i = 41.
  CHECK(on.mask[on.index(41, 30)] == cloak::workbench::Mask::interior);
}
