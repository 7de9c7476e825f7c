#include "cloak/bie.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cloak/cxlinalg.hpp"
#include "cloak/specfun.hpp"

namespace cloak::bie {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double cross(Vec2 tangent, Vec2 diff) { return tangent.y * diff.x - tangent.x * diff.y; }

}  // namespace

ParamCurve ParamCurve::kite(double scale, Vec2 center) {
  if (!(scale > 0.0)) throw std::invalid_argument("kite scale must be positive");
  return ParamCurve(CurveKind::kite, scale, center, [scale, center](double t) {
    const double c = std::cos(t), s = std::sin(t), c2 = std::cos(2 * t), s2 = std::sin(2 * t);
    return CurvePoint{center + scale * Vec2{c + 0.65 * c2 - 0.65, 1.5 * s},
                      scale * Vec2{-s - 1.3 * s2, 1.5 * c},
                      scale * Vec2{-c - 2.6 * c2, -1.5 * s}};
  });
}

ParamCurve ParamCurve::circle(double radius, Vec2 center) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  return ParamCurve(CurveKind::circle, radius, center, [radius, center](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return CurvePoint{center + radius * Vec2{c, s}, radius * Vec2{-s, c}, radius * Vec2{-c, -s}};
  });
}

ParamCurve ParamCurve::custom(Evaluator eval) {
  if (!eval) throw std::invalid_argument("custom curve needs an evaluator");
  return ParamCurve(CurveKind::custom, 1.0, {}, std::move(eval));
}

std::vector<CurvePoint> nodes(const ParamCurve& curve, int q) {
  if (q < 2) throw std::invalid_argument("Nystrom half node count must be >= 2");
  std::vector<CurvePoint> out(2 * static_cast<std::size_t>(q));
  for (int j = 0; j < 2 * q; ++j) out[j] = curve(kPi * j / q);
  return out;
}

bool NystromSolution::near_boundary(Vec2 x) const {
  double h = 0.0;
  for (const auto& p : points) h = std::max(h, norm(p.d1));
  h *= kPi / q;
  for (const auto& p : points)
    if (norm(x - p.pos) < h) return true;
  return false;
}

bool NystromSolution::inside(Vec2 x) const {
  bool in = false;
  const std::size_t n = points.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = points[i].pos, b = points[j].pos;
    if ((a.y > x.y) != (b.y > x.y) && x.x < (b.x - a.x) * (x.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

namespace {

struct KernelPair {
  cplx k1;  // coefficient of ln(4 sin^2((t - tau)/2))
  cplx k2;  // smooth remainder
};

// Split kernel of 2 (K - i eta S) between x = x(t) and the node y = x(tau).
KernelPair split_kernel(const CurvePoint& x, double t, const CurvePoint& y, double tau, double k, double eta) {
  const double speed = norm(y.d1);
  const Vec2 diff = x.pos - y.pos;
  const double dist = norm(diff);
  const auto c = specfun::cylinder01(k * dist);
  const cplx h0{c.j0, c.y0};
  const cplx h1{c.j1, c.y1};
  const double cr = cross(y.d1, diff);
  const double sn = std::sin(0.5 * (t - tau));
  const double lg = std::log(4.0 * sn * sn);
  const cplx l = 0.5 * kI * k * cr * h1 / dist;
  const double l1 = -k / (2.0 * kPi) * cr * c.j1 / dist;
  const cplx mm = 0.5 * kI * h0 * speed;
  const double m1 = -c.j0 * speed / (2.0 * kPi);
  return {l1 - kI * eta * m1, (l - l1 * lg) - kI * eta * (mm - m1 * lg)};
}

KernelPair diagonal_kernel(const CurvePoint& y, double k, double eta) {
  const double speed = norm(y.d1);
  const double l_diag = (y.d1.y * y.d2.x - y.d1.x * y.d2.y) / (2.0 * kPi * speed * speed);
  const cplx m1 = -speed / (2.0 * kPi);
  const cplx m2 = (0.5 * kI - specfun::kEulerGamma / kPi - std::log(0.5 * k * speed) / kPi) * speed;
  return {-kI * eta * m1, l_diag - kI * eta * m2};
}

// Weight of the logarithmic quadrature for lag s = t - t_j.
double log_weight(int q, double s) {
  double acc = 0.0;
  for (int p = 1; p < q; ++p) acc += std::cos(p * s) / p;
  return -2.0 * kPi / q * acc - kPi / (static_cast<double>(q) * q) * std::cos(q * s);
}

}  // namespace

NystromSolution assemble_and_solve_cfie(const ParamCurve& curve, double k, std::span<const cplx> incident_trace,
                                        int q) {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (q < 2) throw std::invalid_argument("Nystrom half node count must be >= 2");
  const std::size_t m = 2 * static_cast<std::size_t>(q);
  if (incident_trace.size() != m) throw std::invalid_argument("incident trace must have 2Q samples");

  NystromSolution sol;
  sol.k = k;
  sol.eta = k;
  sol.q = q;
  sol.points = nodes(curve, q);
  sol.t.resize(m);
  for (std::size_t j = 0; j < m; ++j) sol.t[j] = kPi * static_cast<double>(j) / q;

  // Weights R_l, indexed by (i - j) mod 2Q.
  std::vector<double> r(m);
  for (std::size_t l = 0; l < m; ++l) r[l] = log_weight(q, kPi * static_cast<double>(l) / q);

  const double eta = sol.eta;
  linalg::CMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const KernelPair kp = i == j ? diagonal_kernel(sol.points[j], k, eta)
                                   : split_kernel(sol.points[i], sol.t[i], sol.points[j], sol.t[j], k, eta);
      const std::size_t lag = (i + m - j) % m;
      a(i, j) = r[lag] * kp.k1 + (kPi / q) * kp.k2 + (i == j ? 1.0 : 0.0);
    }
  }

  linalg::CVector rhs(m);
  for (std::size_t j = 0; j < m; ++j) rhs[j] = -2.0 * incident_trace[j];
  const double rhs_norm = linalg::norm(rhs);
  if (rhs_norm == 0.0) {
    sol.density.assign(m, cplx{});
    return sol;
  }
  const linalg::LuFactorization lu(a);
  sol.density = lu.solve(rhs);
  linalg::CVector res = linalg::multiply(a, sol.density);
  for (std::size_t j = 0; j < m; ++j) res[j] -= rhs[j];
  sol.residual = linalg::norm(res) / rhs_norm;
  return sol;
}

cplx scattered_eval(const NystromSolution& sol, Vec2 x) {
  cplx acc{};
  const double k = sol.k;
  for (std::size_t j = 0; j < sol.points.size(); ++j) {
    if (sol.density[j] == cplx{}) continue;
    const CurvePoint& y = sol.points[j];
    const Vec2 diff = x - y.pos;
    const double dist = norm(diff);
    const auto c = specfun::cylinder01(k * dist);
    const cplx h0{c.j0, c.y0};
    const cplx h1{c.j1, c.y1};
    const cplx dl = 0.25 * kI * k * h1 * cross(y.d1, diff) / dist;
    const cplx sl = 0.25 * kI * h0 * norm(y.d1);
    acc += (dl - kI * sol.eta * sl) * sol.density[j];
  }
  return acc * (kPi / sol.q);
}

cplx density_at(const NystromSolution& sol, double t) {
  const std::size_t m = sol.density.size();
  const int q = sol.q;
  cplx acc{};
  for (std::size_t j = 0; j < m; ++j) {
    const double s = t - sol.t[j];
    double dk = 1.0 + std::cos(q * s);
    for (int p = 1; p < q; ++p) dk += 2.0 * std::cos(p * s);
    acc += dk * sol.density[j];
  }
  return acc / static_cast<double>(m);
}

cplx boundary_value(const NystromSolution& sol, const ParamCurve& curve, double t) {
  const CurvePoint x = curve(t);
  const int q = sol.q;
  cplx acc{};
  for (std::size_t j = 0; j < sol.points.size(); ++j) {
    const double s = t - sol.t[j];
    if (std::abs(std::remainder(s, 2.0 * kPi)) < 1e-12) throw std::domain_error("boundary_value: t is a node");
    const KernelPair kp = split_kernel(x, t, sol.points[j], sol.t[j], sol.k, sol.eta);
    acc += (log_weight(q, s) * kp.k1 + (kPi / q) * kp.k2) * sol.density[j];
  }
  return 0.5 * (density_at(sol, t) + acc);
}

cplx circle_series_oracle(double a, double k, Vec2 d, Vec2 x, int n_terms) {
  const double r = norm(x);
  if (!(r > a)) throw std::domain_error("circle_series_oracle: point is not exterior to the circle");
  const int n_max = std::max(n_terms, static_cast<int>(std::ceil(k * a)) + 20);
  std::vector<double> ja(n_max + 1), ya(n_max + 1), jr(n_max + 1), yr(n_max + 1);
  specfun::bessel_jy_sequence(n_max, k * a, ja, ya);
  specfun::bessel_jy_sequence(n_max, k * r, jr, yr);
  const double th = angle(x);
  const double thd = angle(d);
  cplx sum{};
  for (int n = n_max; n >= 0; --n) {
    const cplx ratio = ja[n] / cplx{ja[n], ya[n]} * cplx{jr[n], yr[n]};
    static constexpr cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const cplx in = kIPow[n % 4];
    // Order -n contributes i^n ratio_n e^{-in(th - thd)} by the parity of J and H.
    const cplx pos = in * std::exp(kI * (n * (th - thd)));
    const cplx neg = in * std::exp(-kI * (n * (th - thd)));
    sum += ratio * (n == 0 ? pos : pos + neg);
  }
  return -sum;
}

}  // namespace cloak::bie
