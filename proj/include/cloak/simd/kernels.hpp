#pragma once

// Data-parallel inner loops shared by the linear algebra and the field
// evaluators. Each kernel has a scalar reference implementation and, on
// x86-64, an AVX2/FMA variant chosen at runtime by CPU detection.
//
// Complex arrays are std::complex<double> (interleaved re, im).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace cloak::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  // sum conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum |x_i|^2
  double (*norm2)(const cplx* x, std::size_t n);
  // (x_i, y_i) <- (a x_i + b y_i, c x_i + d y_i)
  void (*rot2)(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d);
  // y_i += a x_i
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // out_i = h(z_i) for the degree 2n-1 Hermite polynomial, central-binomial form
  void (*hermite_central)(const cplx* z, cplx* out, std::size_t count, int n, double delta_star);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// Table in use. Picked once: AVX2 when available unless the environment
/// variable CLOAK_SIMD=scalar is set.
const KernelTable& active();

/// Overrides the runtime choice (tests, benchmarking). Throws if the backend
/// is unavailable.
void force_backend(Backend b);

std::string_view backend_name(Backend b);

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline double norm2(std::span<const cplx> x) { return active().norm2(x.data(), x.size()); }
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace cloak::simd
