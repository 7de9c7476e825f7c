#include "cloak/simd/kernels.hpp"

namespace cloak::simd {
namespace {

// Complex products are spelled out so the scalar path has no hidden
// NaN/inf recovery branches and matches the vector lanes term by term.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void rot2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += mul(a, x[i]);
}

void hermite_central(const cplx* z, cplx* out, std::size_t count, int n, double delta_star) {
  const double inv = 1.0 / delta_star;
  for (std::size_t i = 0; i < count; ++i) {
    const cplx w = z[i] * inv;
    const cplx p = mul(w, cplx{1.0, 0.0} - w);
    cplx term{1.0, 0.0};
    cplx sum{1.0, 0.0};
    for (int k = 1; k < n; ++k) {
      term = mul(term, p) * ((4.0 * k - 2.0) / k);
      sum += term;
    }
    out[i] = cplx{0.5, 0.0} + mul(cplx{0.5, 0.0} - w, sum);
  }
}

constexpr KernelTable kScalar{Backend::scalar, dotc, norm2, rot2, axpy, hermite_central};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace cloak::simd
