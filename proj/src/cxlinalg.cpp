#include "cloak/cxlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cloak/simd/kernels.hpp"

namespace cloak::linalg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Column-major scratch storage; all Jacobi work happens on contiguous columns.
struct Columns {
  std::size_t len = 0;
  std::size_t count = 0;
  std::vector<cplx> d;

  Columns(std::size_t l, std::size_t c) : len(l), count(c), d(l * c) {}
  cplx* col(std::size_t j) { return d.data() + j * len; }
  const cplx* col(std::size_t j) const { return d.data() + j * len; }
};

Columns to_columns(const CMatrix& a, bool adjoint) {
  if (!adjoint) {
    Columns c(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t k = 0; k < a.cols(); ++k) c.col(k)[r] = a(r, k);
    return c;
  }
  Columns c(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) c.col(r)[k] = std::conj(a(r, k));
  return c;
}

CMatrix from_columns(const Columns& c, std::size_t ncols) {
  CMatrix m(c.len, ncols);
  for (std::size_t k = 0; k < ncols; ++k)
    for (std::size_t r = 0; r < c.len; ++r) m(r, k) = c.col(k)[r];
  return m;
}

// Fills the columns flagged invalid with unit vectors orthogonal to every
// valid column (classical Gram-Schmidt run twice against canonical vectors).
void complete_degenerate(Columns& q, std::vector<bool>& valid) {
  const auto& k = simd::active();
  std::size_t candidate = 0;
  std::vector<cplx> v(q.len);
  for (std::size_t j = 0; j < q.count; ++j) {
    if (valid[j]) continue;
    while (candidate < q.len) {
      std::fill(v.begin(), v.end(), cplx{});
      v[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < q.count; ++i) {
          if (!valid[i]) continue;
          const cplx proj = k.dotc(q.col(i), v.data(), q.len);
          k.axpy(-proj, q.col(i), v.data(), q.len);
        }
      }
      const double nv = std::sqrt(k.norm2(v.data(), q.len));
      if (nv > 0.5) {
        for (std::size_t r = 0; r < q.len; ++r) q.col(j)[r] = v[r] / nv;
        valid[j] = true;
        break;
      }
    }
    if (!valid[j]) throw std::logic_error("complete_degenerate: ran out of candidate vectors");
  }
}

// Orthonormal complement of the p orthonormal columns of `basis` via
// Householder QR: returns len - p columns.
Columns orthogonal_complement(const Columns& basis) {
  const std::size_t n = basis.len;
  const std::size_t p = basis.count;
  const auto& k = simd::active();
  Columns x = basis;
  std::vector<std::vector<cplx>> reflectors(p);
  std::vector<double> scale(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    cplx* xj = x.col(j) + j;
    const std::size_t len = n - j;
    const double nx = std::sqrt(k.norm2(xj, len));
    auto& v = reflectors[j];
    v.assign(xj, xj + len);
    if (nx == 0.0) continue;
    const cplx phase = std::abs(xj[0]) > 0.0 ? xj[0] / std::abs(xj[0]) : cplx{1.0, 0.0};
    v[0] += phase * nx;
    const double vv = k.norm2(v.data(), len);
    if (vv == 0.0) continue;
    scale[j] = 2.0 / vv;
    for (std::size_t c = j; c < p; ++c) {
      cplx* col = x.col(c) + j;
      const cplx proj = scale[j] * k.dotc(v.data(), col, len);
      k.axpy(-proj, v.data(), col, len);
    }
  }
  Columns out(n, n - p);
  for (std::size_t c = 0; c < n - p; ++c) {
    cplx* e = out.col(c);
    e[p + c] = 1.0;
    for (std::size_t j = p; j-- > 0;) {
      if (scale[j] == 0.0) continue;
      const std::size_t len = n - j;
      const cplx proj = scale[j] * k.dotc(reflectors[j].data(), e + j, len);
      k.axpy(-proj, reflectors[j].data(), e + j, len);
    }
  }
  return out;
}

struct JacobiResult {
  Columns u;  // len x count, orthonormal
  std::vector<double> sigma;
  Columns v;  // count x count, unitary
  int sweeps = 0;
};

// One-sided (Hestenes) Jacobi on the columns of w, len >= count.
JacobiResult hestenes(Columns w, const SvdOptions& opts) {
  const std::size_t m = w.len;
  const std::size_t n = w.count;
  const auto& k = simd::active();
  const double tol = opts.tolerance > 0.0 ? opts.tolerance : static_cast<double>(std::max<std::size_t>(m, 1)) * kEps;

  Columns v(n, n);
  for (std::size_t j = 0; j < n; ++j) v.col(j)[j] = 1.0;

  std::vector<double> nrm(n);
  int sweep = 0;
  bool converged = n < 2;
  while (!converged) {
    if (sweep >= opts.max_sweeps) {
      throw ConvergenceError("Jacobi SVD did not converge after " + std::to_string(sweep) + " sweeps", sweep);
    }
    ++sweep;
    for (std::size_t j = 0; j < n; ++j) nrm[j] = k.norm2(w.col(j), m);
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = nrm[i];
        const double b = nrm[j];
        if (a <= std::numeric_limits<double>::min() || b <= std::numeric_limits<double>::min()) continue;
        const cplx g = k.dotc(w.col(i), w.col(j), m);
        const double ag = std::abs(g);
        if (ag <= tol * std::sqrt(a) * std::sqrt(b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * ag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx e = std::conj(g) / ag;
        // col_i <- c col_i - s e col_j ; col_j <- s col_i + c e col_j
        k.rot2(w.col(i), w.col(j), m, c, -s * e, s, c * e);
        k.rot2(v.col(i), v.col(j), n, c, -s * e, s, c * e);
        nrm[i] = a - t * ag;
        nrm[j] = b + t * ag;
      }
    }
    converged = !rotated;
  }

  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = std::sqrt(k.norm2(w.col(j), m));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  JacobiResult res{Columns(m, n), std::vector<double>(n), Columns(n, n), sweep};
  std::vector<bool> valid(n, true);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    res.sigma[jj] = sig[j];
    std::copy_n(v.col(j), n, res.v.col(jj));
    if (sig[j] > std::numeric_limits<double>::min()) {
      for (std::size_t r = 0; r < m; ++r) res.u.col(jj)[r] = w.col(j)[r] / sig[j];
    } else {
      res.sigma[jj] = 0.0;
      valid[jj] = false;
    }
  }
  complete_degenerate(res.u, valid);
  return res;
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

double CMatrix::frobenius_norm() const { return std::sqrt(simd::norm2(data_)); }

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  CMatrix c(a.rows(), b.cols());
  const auto& k = simd::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* out = c.row(i).data();
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx s = a(i, l);
      if (s == cplx{}) continue;
      k.axpy(s, b.row(l).data(), out, b.cols());
    }
  }
  return c;
}

CVector multiply(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw DimensionError("multiply: vector length differs from column count");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    const auto r = a.row(i);
    for (std::size_t l = 0; l < r.size(); ++l) s += r[l] * x[l];
    y[i] = s;
  }
  return y;
}

double norm(std::span<const cplx> x) { return std::sqrt(simd::norm2(x)); }

TruncationPolicy::TruncationPolicy(double tau) : tau_(tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("truncation cutoff must lie in (0, 1)");
}

std::size_t TruncationPolicy::rank(const SvdFactors& f) const {
  const double cut = tau_ * f.sigma_max();
  return static_cast<std::size_t>(
      std::count_if(f.sigma.begin(), f.sigma.end(), [&](double s) { return s > cut; }));
}

SvdFactors svd(const CMatrix& a, SvdOptions opts) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("svd: empty matrix");
  if (!a.all_finite()) throw std::domain_error("svd: matrix has non-finite entries");
  SvdFactors f;
  if (a.rows() >= a.cols()) {
    JacobiResult r = hestenes(to_columns(a, false), opts);
    f.u = from_columns(r.u, r.u.count);
    f.sigma = std::move(r.sigma);
    f.v = from_columns(r.v, r.v.count);
    f.sweeps = r.sweeps;
    return f;
  }
  // Wide: A^H = U' S V'^H, so A = V' S U'^H.
  JacobiResult r = hestenes(to_columns(a, true), opts);
  const std::size_t n = a.cols();
  const std::size_t p = a.rows();
  Columns vfull(n, n);
  std::copy(r.u.d.begin(), r.u.d.end(), vfull.d.begin());
  const Columns rest = orthogonal_complement(r.u);
  std::copy(rest.d.begin(), rest.d.end(), vfull.d.begin() + static_cast<std::ptrdiff_t>(n * p));
  f.u = from_columns(r.v, p);
  f.sigma = std::move(r.sigma);
  f.v = from_columns(vfull, n);
  f.sweeps = r.sweeps;
  return f;
}

CVector truncated_pinv_apply(const SvdFactors& f, const TruncationPolicy& policy, std::span<const cplx> rhs) {
  if (rhs.size() != f.rows()) throw DimensionError("truncated_pinv_apply: rhs length differs from row count");
  const std::size_t keep = policy.rank(f);
  CVector x(f.cols());
  for (std::size_t i = 0; i < keep; ++i) {
    cplx c{};
    for (std::size_t r = 0; r < f.rows(); ++r) c += std::conj(f.u(r, i)) * rhs[r];
    c /= f.sigma[i];
    for (std::size_t r = 0; r < f.cols(); ++r) x[r] += c * f.v(r, i);
  }
  return x;
}

CMatrix nullspace_basis(const SvdFactors& f, const TruncationPolicy& policy) {
  const std::size_t keep = policy.rank(f);
  const std::size_t total = f.v.cols();
  CMatrix basis(f.cols(), total - keep);
  for (std::size_t c = keep; c < total; ++c)
    for (std::size_t r = 0; r < f.cols(); ++r) basis(r, c - keep) = f.v(r, c);
  return basis;
}

TwoStepResult two_step_solve(const CMatrix& a, const CMatrix& b, std::span<const cplx> rhs,
                             const TruncationPolicy& tau_a, const TruncationPolicy& tau_b) {
  if (a.cols() != b.cols()) throw DimensionError("two_step_solve: A and B column counts differ");
  if (rhs.size() != a.rows()) throw DimensionError("two_step_solve: rhs length differs from rows of A");

  TwoStepResult out;
  CVector neg(rhs.size());
  std::transform(rhs.begin(), rhs.end(), neg.begin(), [](cplx z) { return -z; });

  const SvdFactors fa = svd(a);
  out.b0 = truncated_pinv_apply(fa, tau_a, neg);
  const CMatrix null_a = nullspace_basis(fa, tau_a);

  auto& rep = out.report;
  rep.sigma_max_a = fa.sigma_max();
  rep.rank_a = tau_a.rank(fa);
  rep.nullspace_dim = null_a.cols();

  const CVector bb0 = multiply(b, out.b0);
  out.b = out.b0;
  if (null_a.cols() > 0 && b.rows() > 0) {
    const CMatrix bn = multiply(b, null_a);
    const SvdFactors fbn = svd(bn);
    CVector neg_bb0(bb0.size());
    std::transform(bb0.begin(), bb0.end(), neg_bb0.begin(), [](cplx z) { return -z; });
    const CVector y = truncated_pinv_apply(fbn, tau_b, neg_bb0);
    const CVector correction = multiply(null_a, y);
    for (std::size_t i = 0; i < out.b.size(); ++i) out.b[i] += correction[i];
    rep.correction_norm = norm(correction);
    rep.sigma_max_bn = fbn.sigma_max();
    rep.rank_bn = tau_b.rank(fbn);
  }

  auto residual = [&](const CVector& x) {
    CVector r = multiply(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += rhs[i];
    return norm(r);
  };
  rep.first_residual_step1 = residual(out.b0);
  rep.first_residual = residual(out.b);
  rep.second_objective_step1 = norm(bb0);
  rep.second_objective = norm(multiply(b, out.b));
  rep.solution_norm = norm(out.b);
  return out;
}

LuFactorization::LuFactorization(CMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw DimensionError("LuFactorization: matrix must be square");
  std::iota(perm_.begin(), perm_.end(), 0);
  const auto& k = simd::active();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = std::abs(lu_(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, c));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("LuFactorization: singular matrix at column " + std::to_string(c));
    if (piv != c) {
      std::swap_ranges(lu_.row(c).begin(), lu_.row(c).end(), lu_.row(piv).begin());
      std::swap(perm_[c], perm_[piv]);
    }
    const cplx inv = 1.0 / lu_(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx l = lu_(r, c) * inv;
      lu_(r, c) = l;
      if (l == cplx{}) continue;
      k.axpy(-l, lu_.row(c).data() + c + 1, lu_.row(r).data() + c + 1, n - c - 1);
    }
  }
}

CVector LuFactorization::solve(std::span<const cplx> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw DimensionError("LuFactorization::solve: rhs length mismatch");
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

}  // namespace cloak::linalg
