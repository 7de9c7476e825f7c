#include "cloak/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cloak::specfun {
namespace {

constexpr double kAsymptoticThreshold = 25.0;
constexpr double kTinyArgument = 1e-8;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

void check_argument(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("cylinder function argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

void check_order(int n, BesselOrderRange range) {
  if (n > range.n_max || n < -range.n_max) {
    throw OrderError("order " + std::to_string(n) + " exceeds n_max " +
                     std::to_string(range.n_max));
  }
}

double parity(int n) { return (n & 1) ? -1.0 : 1.0; }

// H^{(1)}_nu(x) for nu in {0, 1}, x >= 25.
cplx hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  cplx term{1.0, 0.0};
  cplx sum = term;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= cplx{0.0, 1.0} * ((mu - odd * odd) / (8.0 * k * x));
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series has started to diverge
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  const double phase = x - 0.5 * nu * std::numbers::pi - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * cplx{std::cos(phase), std::sin(phase)} * sum;
}

// Miller's algorithm. Returns normalised J_k(x) for k = 0..L where L is the
// start order chosen so that the truncation is below double precision.
std::vector<double> miller_j(int n_max, double x) {
  const double top = std::max(static_cast<double>(n_max), x);
  int start = static_cast<int>(top + 30.0 + 6.0 * std::sqrt(top));
  start += start & 1;
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start] = 1e-30;
  double norm = 0.0;  // f_0 + 2 sum f_2m, accumulated as we descend
  for (int k = start; k >= 1; --k) {
    f[k - 1] = (2.0 * k / x) * f[k] - f[k + 1];
    if (k % 2 == 0) norm += 2.0 * f[k];
    if (std::abs(f[k - 1]) > kRescaleAbove) {
      for (int i = k - 1; i <= start; ++i) f[i] *= kRescaleBy;
      norm *= kRescaleBy;
    }
  }
  norm += f[0];
  f.resize(static_cast<std::size_t>(start) + 1);
  for (double& v : f) v /= norm;
  return f;
}

// Neumann series for Y_0, Y_1 in terms of the J values from miller_j.
void neumann_y01(const std::vector<double>& jv, double x, double& y0, double& y1) {
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  const int last = static_cast<int>(jv.size()) - 1;
  // Sum from the top so the small tail terms are accumulated first.
  for (int k = last / 2; k >= 1; --k) {
    const double sign = (k & 1) ? -1.0 : 1.0;
    if (2 * k <= last) s0 += sign * jv[2 * k] / k;
    if (2 * k + 1 <= last) s1 += sign * (2.0 * k + 1.0) * jv[2 * k + 1] / (k * (k + 1.0));
  }
  const double two_pi = 2.0 / std::numbers::pi;
  y0 = two_pi * lg * jv[0] - 2.0 * two_pi * s0;
  y1 = -two_pi / x * jv[0] + two_pi * (lg - 1.0) * jv[1] - two_pi * s1;
}

void tiny_argument(int n_max, double x, std::span<double> j, std::span<double> y) {
  const double half = 0.5 * x;
  if (!j.empty()) {
    double lead = 1.0;  // (x/2)^k / k!
    for (int k = 0; k <= n_max; ++k) {
      if (k > 0) lead *= half / k;
      j[k] = lead * (1.0 - half * half / (k + 1.0));
    }
  }
  if (!y.empty()) {
    const double lg = std::log(half) + kEulerGamma;
    const double y0 = (2.0 / std::numbers::pi) * lg;
    const double y1 = -2.0 / (std::numbers::pi * x) + (x / std::numbers::pi) * (lg - 0.5);
    y[0] = y0;
    if (n_max >= 1) y[1] = y1;
    for (int k = 1; k < n_max; ++k) y[k + 1] = (2.0 * k / x) * y[k] - y[k - 1];
  }
}

}  // namespace

void bessel_jy_sequence(int n_max, double x, std::span<double> j, std::span<double> y) {
  check_argument(x);
  if (n_max < 0) throw OrderError("n_max must be non-negative");
  const auto need = static_cast<std::size_t>(n_max) + 1;
  if ((!j.empty() && j.size() < need) || (!y.empty() && y.size() < need)) {
    throw std::length_error("bessel_jy_sequence: output span too short");
  }
  if (x < kTinyArgument) {
    tiny_argument(n_max, x, j, y);
    return;
  }
  // Y needs J_0 and J_1 even when only Y is requested below the threshold.
  const bool need_miller = !j.empty() || x < kAsymptoticThreshold;
  std::vector<double> jv;
  if (need_miller) jv = miller_j(std::max(n_max, 1), x);
  if (!j.empty()) std::copy_n(jv.begin(), need, j.begin());
  if (y.empty()) return;

  double y0 = 0.0;
  double y1 = 0.0;
  if (x >= kAsymptoticThreshold) {
    y0 = hankel_asymptotic(0, x).imag();
    y1 = hankel_asymptotic(1, x).imag();
  } else {
    neumann_y01(jv, x, y0, y1);
  }
  y[0] = y0;
  if (n_max >= 1) y[1] = y1;
  for (int k = 1; k < n_max; ++k) y[k + 1] = (2.0 * k / x) * y[k] - y[k - 1];
}

void hankel1_sequence(int n_max, double x, std::span<cplx> h) {
  const auto need = static_cast<std::size_t>(n_max) + 1;
  if (h.size() < need) throw std::length_error("hankel1_sequence: output span too short");
  std::vector<double> j(need), y(need);
  bessel_jy_sequence(n_max, x, j, y);
  for (std::size_t k = 0; k < need; ++k) h[k] = {j[k], y[k]};
}

Cylinder01 cylinder01(double x) {
  check_argument(x);
  if (x >= kAsymptoticThreshold) {
    const cplx h0 = hankel_asymptotic(0, x);
    const cplx h1 = hankel_asymptotic(1, x);
    return {h0.real(), h1.real(), h0.imag(), h1.imag()};
  }
  double j[2], y[2];
  bessel_jy_sequence(1, x, j, y);
  return {j[0], j[1], y[0], y[1]};
}

double bessel_j(int n, double x, BesselOrderRange range) {
  check_argument(x);
  check_order(n, range);
  const int m = std::abs(n);
  std::vector<double> j(static_cast<std::size_t>(m) + 1);
  bessel_jy_sequence(m, x, j, {});
  return n < 0 ? parity(m) * j[m] : j[m];
}

double bessel_y(int n, double x, BesselOrderRange range) {
  check_argument(x);
  check_order(n, range);
  const int m = std::abs(n);
  std::vector<double> y(static_cast<std::size_t>(std::max(m, 1)) + 1);
  bessel_jy_sequence(std::max(m, 1), x, {}, y);
  return n < 0 ? parity(m) * y[m] : y[m];
}

cplx hankel1(int n, double x, BesselOrderRange range) {
  check_argument(x);
  check_order(n, range);
  const int m = std::abs(n);
  std::vector<double> j(static_cast<std::size_t>(std::max(m, 1)) + 1);
  std::vector<double> y(j.size());
  bessel_jy_sequence(std::max(m, 1), x, j, y);
  const cplx h{j[m], y[m]};
  return n < 0 ? parity(m) * h : h;
}

std::uint64_t central_binomial_exact(int k) {
  if (k < 0 || k > 33) throw std::out_of_range("central_binomial_exact: k outside [0, 33]");
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<unsigned>(4 * i - 2) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(c);
}

double central_binomial(int k) {
  if (k < 0 || k > 500) throw std::out_of_range("central_binomial: k outside [0, 500]");
  if (k <= 30) return static_cast<double>(central_binomial_exact(k));
  double c = static_cast<double>(central_binomial_exact(30));
  for (int i = 31; i <= k; ++i) c *= (4.0 * i - 2.0) / i;
  return c;
}

}  // namespace cloak::specfun
