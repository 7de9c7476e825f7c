#include "cloak/quasistatic.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cloak/simd/kernels.hpp"

namespace cloak::quasistatic {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_degree(int n) {
  if (n < 1) throw std::invalid_argument("Hermite degree parameter n must be >= 1");
  if (n > kMaxHermiteDegree) {
    throw std::overflow_error("Hermite degree parameter n = " + std::to_string(n) + " exceeds " +
                              std::to_string(kMaxHermiteDegree));
  }
}

// C(n + j - 1, j) as an exact integer while it fits, otherwise via lgamma.
double binomial_nj(int n, int j) {
  const int top = n + j - 1;
  if (top <= 66) {
    unsigned __int128 c = 1;
    for (int i = 1; i <= j; ++i) c = c * static_cast<unsigned>(top - j + i) / static_cast<unsigned>(i);
    return static_cast<double>(c);
  }
  return std::exp(std::lgamma(top + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n + 0.0));
}

// The two cross-validation forms sum alternating terms outside the lobes, so
// they are evaluated in binary128 to stay comparable with the central form.
#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

struct WideComplex {
  wide re = 0;
  wide im = 0;
};

WideComplex operator+(WideComplex a, WideComplex b) { return {a.re + b.re, a.im + b.im}; }
WideComplex operator-(WideComplex a, WideComplex b) { return {a.re - b.re, a.im - b.im}; }
WideComplex operator*(WideComplex a, WideComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
WideComplex operator*(WideComplex a, wide s) { return {a.re * s, a.im * s}; }

WideComplex widen(cplx z) { return {z.real(), z.imag()}; }
cplx narrow(WideComplex z) { return {static_cast<double>(z.re), static_cast<double>(z.im)}; }

WideComplex wide_pow(WideComplex base, int n) {
  WideComplex out{1, 0};
  for (; n > 0; n >>= 1) {
    if (n & 1) out = out * base;
    base = base * base;
  }
  return out;
}

cplx hermite_product_sum(cplx z, int n, double ds) {
  // Taylor coefficients of (y - delta*)^{-n} at y = 0:
  // d_0 = (-delta*)^{-n}, d_j = d_{j-1} (n + j - 1) / delta*.
  const wide wds = ds;
  wide d = 1;
  for (int i = 0; i < n; ++i) d /= -wds;
  const WideComplex wz = widen(z);
  WideComplex zj_over_fact{1, 0};
  WideComplex sum{d, 0};
  for (int j = 1; j < n; ++j) {
    d *= (n + j - 1) / wds;
    zj_over_fact = zj_over_fact * wz * (wide(1) / j);
    sum = sum + zj_over_fact * d;
  }
  return narrow(wide_pow(wz - WideComplex{wds, 0}, n) * sum);
}

cplx hermite_binomial(cplx z, int n, double ds) {
  const WideComplex w = widen(z) * (wide(1) / wide(ds));
  std::vector<wide> c(n);
  c[0] = 1;
  for (int j = 1; j < n; ++j) c[j] = c[j - 1] * (n + j - 1) / j;
  WideComplex sum{};
  for (int j = n - 1; j >= 0; --j) sum = sum * w + WideComplex{c[j], 0};
  return narrow(wide_pow(WideComplex{1, 0} - w, n) * sum);
}

// Near delta* the central sum reaches its tiny value by cancellation. Where
// the central series converges and Re w > 1/2 its infinite sum is
// 1 / (2w - 1), which leaves h = -(1/2 - w) sum_{k >= n} C(2k, k) x^k.
constexpr double kTailRadius = 0.8;

bool use_central_tail(cplx w) {
  return w.real() > 0.5 && 4.0 * std::abs(w * (1.0 - w)) < kTailRadius;
}

cplx central_tail(cplx w, int n) {
  const cplx x = w * (1.0 - w);
  cplx term{1.0, 0.0};
  for (int k = 1; k <= n; ++k) term *= x * ((4.0 * k - 2.0) / k);
  cplx tail = term;
  for (int k = n + 1; k < n + 2000; ++k) {
    term *= x * ((4.0 * k - 2.0) / k);
    tail += term;
    if (std::abs(term) <= 1e-18 * std::abs(tail)) break;
  }
  return -(0.5 - w) * tail;
}

cplx hermite_central(cplx z, int n, double ds) {
  const cplx w = z / ds;
  if (use_central_tail(w)) return central_tail(w, n);
  cplx out;
  simd::scalar_kernels().hermite_central(&z, &out, 1, n, ds);
  return out;
}

}  // namespace

StarParams star_params(double alpha, double delta) {
  if (!(alpha >= 0.0 && alpha < delta)) throw std::invalid_argument("star_params requires 0 <= alpha < delta");
  const double den = delta * delta - alpha * alpha;
  return {alpha / den, delta / den};
}

StarParams unstar_params(double alpha_star, double delta_star) {
  const StarParams p = star_params(alpha_star, delta_star);
  return p;
}

double lobe_radius(double delta_star) { return delta_star / (2.0 + 2.0 * std::numbers::sqrt2); }

HermiteCloakSpec HermiteCloakSpec::make(double alpha, double delta, double gamma, int n) {
  if (!(alpha > 0.0 && alpha < delta)) throw std::invalid_argument("cloak geometry requires 0 < alpha < delta");
  if (!(gamma > alpha + delta)) throw std::invalid_argument("cloak geometry requires gamma > alpha + delta");
  check_degree(n);
  const StarParams p = star_params(alpha, delta);
  return {alpha, delta, gamma, n, p.alpha_star, p.delta_star};
}

HermiteCloakSpec HermiteCloakSpec::from_star(double alpha_star, double delta_star, double gamma, int n) {
  const StarParams p = unstar_params(alpha_star, delta_star);
  HermiteCloakSpec s = make(p.alpha_star, p.delta_star, gamma, n);
  // Keep the requested values bit-exact rather than the round trip.
  s.alpha_star = alpha_star;
  s.delta_star = delta_star;
  return s;
}

bool HermiteCloakSpec::cloaking_regime() const {
  const double bound = lobe_radius(delta_star);
  return 1.0 / gamma < bound && alpha_star < bound;
}

cplx hermite_h(cplx z, int n, double delta_star, HermiteForm form) {
  check_degree(n);
  if (!(delta_star > 0.0)) throw std::invalid_argument("delta* must be positive");
  switch (form) {
    case HermiteForm::product_sum: return hermite_product_sum(z, n, delta_star);
    case HermiteForm::binomial: return hermite_binomial(z, n, delta_star);
    case HermiteForm::central: return hermite_central(z, n, delta_star);
  }
  return {};
}

void hermite_h_batch(std::span<const cplx> z, std::span<cplx> out, int n, double delta_star) {
  check_degree(n);
  if (!(delta_star > 0.0)) throw std::invalid_argument("delta* must be positive");
  if (out.size() < z.size()) throw std::length_error("hermite_h_batch: output too short");
  simd::active().hermite_central(z.data(), out.data(), z.size(), n, delta_star);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cplx w = z[i] / delta_star;
    if (use_central_tail(w)) out[i] = central_tail(w, n);
  }
}

cplx hermite_w(cplx z, int n, double delta_star) {
  check_degree(n);
  const cplx w = z / delta_star;
  const cplx u = 1.0 - w;
  cplx sum{};
  for (int j = n - 1; j >= 0; --j) sum = sum * u + binomial_nj(n, j);
  return std::pow(w, n) * sum;
}

LobeRegion in_figure_eight(cplx z, double delta_star) {
  if (!(delta_star > 0.0)) throw std::invalid_argument("delta* must be positive");
  const double lhs = std::abs(z * z - delta_star * z);
  const double rhs = 0.25 * delta_star * delta_star;
  if (std::abs(lhs - rhs) <= 1e-12) return LobeRegion::boundary;
  if (lhs > rhs) return LobeRegion::outside;
  return z.real() < 0.5 * delta_star ? LobeRegion::left_lobe : LobeRegion::right_lobe;
}

int IncidentPolynomial::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[k] != cplx{}) return k;
  return -1;
}

cplx IncidentPolynomial::operator()(cplx s) const {
  cplx v{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * s + *it;
  return v;
}

cplx device_potential_V(cplx z, const HermiteCloakSpec& spec, const IncidentPolynomial& f) {
  const int n = spec.n;
  const int deg = f.degree();
  if (deg > n) {
    throw DegreeError("incident polynomial degree " + std::to_string(deg) + " exceeds n = " + std::to_string(n));
  }
  if (deg < 0) return {};
  // V = -W(z) sum_k c_k z^{-k}, with W = (z/delta*)^n S(z), so
  // V = -S(z) delta*^{-n} sum_k c_k z^{n-k}.
  const double ds = spec.delta_star;
  const cplx u = 1.0 - z / ds;
  cplx s{};
  for (int j = n - 1; j >= 0; --j) s = s * u + binomial_nj(n, j);
  cplx p{};
  // Horner over z for sum_k c_k z^{n-k} = sum_{e=n-deg}^{n} c_{n-e} z^e.
  for (int e = n; e >= 0; --e) {
    const int k = n - e;
    p = p * z + (k <= deg ? f.coeffs[k] : cplx{});
  }
  return -s * std::pow(ds, -n) * p;
}

cplx device_potential_s(cplx s, const HermiteCloakSpec& spec, const IncidentPolynomial& f) {
  if (s == cplx{}) return {kInf, kInf};
  return device_potential_V(1.0 / s, spec, f);
}

double device_field(cplx s, const HermiteCloakSpec& spec, const IncidentPolynomial& f) {
  if (s == cplx{}) return kInf;
  return device_potential_s(s, spec, f).real();
}

std::vector<cplx> taylor_coeffs(const std::function<cplx(cplx)>& g, cplx center, double radius, int terms,
                                int quad_points) {
  if (!(radius > 0.0)) throw std::invalid_argument("taylor_coeffs: radius must be positive");
  if (terms < 0) throw std::invalid_argument("taylor_coeffs: negative term count");
  const int q = quad_points > 0 ? quad_points : std::max(4 * terms, 256);
  if (q < 4 * terms) throw std::invalid_argument("taylor_coeffs: need at least 4M quadrature points");
  std::vector<cplx> samples(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    const double th = 2.0 * std::numbers::pi * j / q;
    const cplx v = g(center + radius * cplx{std::cos(th), std::sin(th)});
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::domain_error("taylor_coeffs: non-finite sample on the contour");
    }
    samples[j] = v;
  }
  std::vector<cplx> out(static_cast<std::size_t>(terms) + 1);
  double rpow = 1.0;
  for (int m = 0; m <= terms; ++m) {
    cplx acc{};
    for (int j = 0; j < q; ++j) {
      // Reduce the index before forming the angle so m*j stays exact.
      const double th = 2.0 * std::numbers::pi * static_cast<double>((static_cast<std::int64_t>(m) * j) % q) / q;
      acc += samples[j] * cplx{std::cos(th), -std::sin(th)};
    }
    out[m] = acc / (static_cast<double>(q) * rpow);
    rpow *= radius;
  }
  return out;
}

double DiskScatterer::reflection() const { return (1.0 - epsilon) / (1.0 + epsilon); }

void DiskScatterer::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  if (epsilon == -1.0) throw std::invalid_argument("dielectric constant -1 has no finite reflection factor");
  if (series_order < 1) throw std::invalid_argument("disk series order must be >= 1");
}

cplx disk_scattered_potential(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s) {
  const cplx d = s - disk.center;
  if (std::abs(d) < disk.radius * (1.0 - 1e-12)) {
    throw std::domain_error("disk_scattered_field evaluated inside the disk");
  }
  const double rho = disk.reflection();
  const cplx q = disk.radius * disk.radius / d;
  const int top = std::min<int>(disk.series_order, static_cast<int>(coeffs.size()) - 1);
  cplx acc{};
  cplx qm = 1.0;
  for (int m = 1; m <= top; ++m) {
    qm *= q;
    acc += std::conj(coeffs[m]) * qm;
  }
  return rho * acc;
}

double disk_scattered_field(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s) {
  return disk_scattered_potential(coeffs, disk, s).real();
}

cplx disk_interior_potential(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s) {
  const cplx d = s - disk.center;
  if (std::abs(d) > disk.radius * (1.0 + 1e-12)) {
    throw std::domain_error("disk_interior_potential evaluated outside the disk");
  }
  const int top = std::min<int>(disk.series_order, static_cast<int>(coeffs.size()) - 1);
  cplx acc{};
  for (int m = top; m >= 1; --m) acc = (acc + coeffs[m]) * d;
  return coeffs.empty() ? cplx{} : coeffs[0] + (1.0 + disk.reflection()) * acc;
}

}  // namespace cloak::quasistatic
