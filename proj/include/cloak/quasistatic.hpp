#pragma once

// Quasistatic exterior cloak in the plane. Points are complex numbers
// s = x1 + i x2; the inverted plane uses z = 1/s.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cloak::quasistatic {

using cplx = std::complex<double>;

struct StarParams {
  double alpha_star;
  double delta_star;
};

/// alpha* = alpha / (delta^2 - alpha^2), delta* = delta / (delta^2 - alpha^2).
StarParams star_params(double alpha, double delta);

/// Inverse of star_params (the map is an involution).
StarParams unstar_params(double alpha_star, double delta_star);

/// delta* / (2 + 2 sqrt 2): largest disk radius that fits inside either lobe.
double lobe_radius(double delta_star);

struct HermiteCloakSpec {
  double alpha = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  int n = 10;
  double alpha_star = 0.0;
  double delta_star = 0.0;

  /// Validates 0 < alpha < delta, gamma > alpha + delta, n >= 1.
  static HermiteCloakSpec make(double alpha, double delta, double gamma, int n);
  /// Parametrised by the inverted-plane values.
  static HermiteCloakSpec from_star(double alpha_star, double delta_star, double gamma, int n);

  bool cloaking_regime() const;
};

enum class HermiteForm { product_sum, binomial, central };

/// Largest degree parameter accepted before the evaluation is refused.
inline constexpr int kMaxHermiteDegree = 500;

/// The Hermite polynomial of degree 2n-1 with h(0) = 1, h(delta*) = 0 and
/// vanishing derivatives of orders 1..n-1 at both nodes.
cplx hermite_h(cplx z, int n, double delta_star, HermiteForm form = HermiteForm::central);

/// Central form over many points; routed through the SIMD kernel table.
void hermite_h_batch(std::span<const cplx> z, std::span<cplx> out, int n, double delta_star);

/// W = 1 - h, evaluated as h(delta* - z) so the order-n zero at z = 0 is
/// resolved without cancellation.
cplx hermite_w(cplx z, int n, double delta_star);

enum class LobeRegion { left_lobe, right_lobe, outside, boundary };

LobeRegion in_figure_eight(cplx z, double delta_star);

/// F(s) = sum c_k s^k.
struct IncidentPolynomial {
  std::vector<cplx> coeffs;

  static IncidentPolynomial identity() { return {{cplx{0.0}, cplx{1.0}}}; }
  int degree() const;
  cplx operator()(cplx s) const;
};

class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// V(z) = -W(z) sum_k c_k z^{-k}; a polynomial of degree <= 2n-1 when deg F <= n.
cplx device_potential_V(cplx z, const HermiteCloakSpec& spec, const IncidentPolynomial& f);

/// Complex device potential in the physical plane, V(1/s). Infinite at s = 0.
cplx device_potential_s(cplx s, const HermiteCloakSpec& spec, const IncidentPolynomial& f);

/// Real device potential Re V(1/s); +inf at s = 0.
double device_field(cplx s, const HermiteCloakSpec& spec, const IncidentPolynomial& f);

/// Cauchy coefficients g_m of g about `center` from Q-point trapezoid
/// quadrature on the circle of given radius. Q defaults to max(4M, 256).
std::vector<cplx> taylor_coeffs(const std::function<cplx(cplx)>& g, cplx center, double radius, int terms,
                                int quad_points = 0);

struct DiskScatterer {
  cplx center{1.1, 0.0};
  double radius = 0.2;
  double epsilon = -0.99;
  int series_order = 60;

  /// (1 - eps) / (1 + eps)
  double reflection() const;
  void validate() const;
};

/// Complex scattered potential sum_{m>=1} rho R^{2m} conj(g_m) (s - c)^{-m};
/// its real part is the physical field. Requires |s - c| > R.
cplx disk_scattered_potential(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s);
double disk_scattered_field(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s);

/// Interior solution Re[g_0 + (1 + rho) sum_{m>=1} g_m (s - c)^m] for |s - c| < R.
cplx disk_interior_potential(std::span<const cplx> coeffs, const DiskScatterer& disk, cplx s);

}  // namespace cloak::quasistatic
