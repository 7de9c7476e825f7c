// Compiled with -mavx2 -mfma. Only reached after cpu_has_avx2_fma() is true.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace cloak::simd::detail {
namespace {

// One __m256d holds two interleaved complex numbers: [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (ar + i ai) * v for both complex lanes of v.
inline __m256d cmul_scalar(__m256d ar, __m256d ai, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  // re accumulates xr*yr + xi*yi; im accumulates xr*yi - xi*yr.
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d cr0 = _mm256_setzero_pd(), cr1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i), y0 = load2(y + i);
    const __m256d x1 = load2(x + i + 2), y1 = load2(y + i + 2);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    re1 = _mm256_fmadd_pd(x1, y1, re1);
    cr0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), cr0);
    cr1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), cr1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i), y0 = load2(y + i);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    cr0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), cr0);
  }
  const __m256d re = _mm256_add_pd(re0, re1);
  // cr lanes: [xr*yi, xi*yr, ...]; imaginary part is even minus odd.
  const __m256d cr = _mm256_add_pd(cr0, cr1);
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double sr = hsum(re);
  double si = hsum(_mm256_mul_pd(cr, sign));
  for (; i < n; ++i) {
    sr += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    si += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {sr, si};
}

double norm2(const cplx* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i), x1 = load2(x + i + 2);
    a0 = _mm256_fmadd_pd(x0, x0, a0);
    a1 = _mm256_fmadd_pd(x1, x1, a1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i);
    a0 = _mm256_fmadd_pd(x0, x0, a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void rot2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
  const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
  const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    store2(x + i, _mm256_add_pd(cmul_scalar(ar, ai, xv), cmul_scalar(br, bi, yv)));
    store2(y + i, _mm256_add_pd(cmul_scalar(cr, ci, xv), cmul_scalar(dr, di, yv)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_add_pd(load2(y + i), cmul_scalar(ar, ai, load2(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Four points per iteration in split (re, im) registers.
void hermite_central(const cplx* z, cplx* out, std::size_t count, int n, double delta_star) {
  const double inv = 1.0 / delta_star;
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  alignas(32) double re[4], im[4];
  for (; i + 4 <= count; i += 4) {
    for (int l = 0; l < 4; ++l) {
      re[l] = z[i + l].real();
      im[l] = z[i + l].imag();
    }
    const __m256d wr = _mm256_mul_pd(_mm256_load_pd(re), vinv);
    const __m256d wi = _mm256_mul_pd(_mm256_load_pd(im), vinv);
    // p = w (1 - w)
    const __m256d ur = _mm256_sub_pd(one, wr);
    const __m256d ui = _mm256_sub_pd(_mm256_setzero_pd(), wi);
    const __m256d pr = _mm256_fmsub_pd(wr, ur, _mm256_mul_pd(wi, ui));
    const __m256d pi = _mm256_fmadd_pd(wr, ui, _mm256_mul_pd(wi, ur));
    __m256d tr = one, ti = _mm256_setzero_pd();
    __m256d sr = one, si = _mm256_setzero_pd();
    for (int k = 1; k < n; ++k) {
      const __m256d f = _mm256_set1_pd((4.0 * k - 2.0) / k);
      const __m256d nr = _mm256_fmsub_pd(tr, pr, _mm256_mul_pd(ti, pi));
      const __m256d ni = _mm256_fmadd_pd(tr, pi, _mm256_mul_pd(ti, pr));
      tr = _mm256_mul_pd(nr, f);
      ti = _mm256_mul_pd(ni, f);
      sr = _mm256_add_pd(sr, tr);
      si = _mm256_add_pd(si, ti);
    }
    // h = 1/2 + (1/2 - w) * sum
    const __m256d qr = _mm256_sub_pd(half, wr);
    const __m256d qi = _mm256_sub_pd(_mm256_setzero_pd(), wi);
    const __m256d hr = _mm256_add_pd(half, _mm256_fmsub_pd(qr, sr, _mm256_mul_pd(qi, si)));
    const __m256d hi = _mm256_fmadd_pd(qr, si, _mm256_mul_pd(qi, sr));
    _mm256_store_pd(re, hr);
    _mm256_store_pd(im, hi);
    for (int l = 0; l < 4; ++l) out[i + l] = {re[l], im[l]};
  }
  if (i < count) scalar_kernels().hermite_central(z + i, out + i, count - i, n, delta_star);
}

constexpr KernelTable kAvx2{Backend::avx2, dotc, norm2, rot2, axpy, hermite_central};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace cloak::simd::detail
