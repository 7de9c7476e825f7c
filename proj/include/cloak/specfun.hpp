#pragma once

// Integer-order cylinder functions of real positive argument.
//
// J_n comes from Miller's downward recurrence normalised with
// J_0 + 2 sum J_2m = 1. Y_0 and Y_1 use Neumann series over the same
// J values for x < 25 and the Hankel asymptotic expansion beyond; higher
// Y_n follow by upward recurrence, which is stable for Y.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cloak {

using cplx = std::complex<double>;

namespace specfun {

inline constexpr int kDefaultMaxOrder = 200;

/// Largest |n| a caller may request.
struct BesselOrderRange {
  int n_max = kDefaultMaxOrder;
};

/// Thrown for x <= 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown for |n| > n_max.
class OrderError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

double bessel_j(int n, double x, BesselOrderRange range = {});
double bessel_y(int n, double x, BesselOrderRange range = {});
cplx hankel1(int n, double x, BesselOrderRange range = {});

/// Fills j[0..n_max] and y[0..n_max] (non-negative orders) in one pass.
/// Either span may be empty when only the other family is wanted.
void bessel_jy_sequence(int n_max, double x, std::span<double> j, std::span<double> y);

/// h[0..n_max] = H^{(1)}_n(x).
void hankel1_sequence(int n_max, double x, std::span<cplx> h);

/// J_0, J_1, Y_0, Y_1 at once. Cheap path used by the boundary integral kernels.
struct Cylinder01 {
  double j0, j1, y0, y1;
};
Cylinder01 cylinder01(double x);

/// C(2k, k). Exact for k <= 30, floating recurrence beyond.
double central_binomial(int k);

/// Exact C(2k, k) for k <= 33 (fits in 64 bits).
std::uint64_t central_binomial_exact(int k);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace specfun
}  // namespace cloak
