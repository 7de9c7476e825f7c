#pragma once

// Dense complex matrices, a one-sided Jacobi SVD, truncated pseudoinverse
// and the two-step constrained least-squares solve used for device design.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloak::linalg {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  CVector column(std::size_t c) const;
  CMatrix adjoint() const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int sweeps) : std::runtime_error(what), sweeps_(sweeps) {}
  int sweeps() const { return sweeps_; }

 private:
  int sweeps_;
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);
CVector multiply(const CMatrix& a, std::span<const cplx> x);
double norm(std::span<const cplx> x);

/// A = U diag(sigma) V^H with sigma non-increasing.
///
/// U is rows x p and sigma has p = min(rows, cols) entries. V is cols x p
/// when cols <= rows and cols x cols otherwise; the trailing cols - p
/// columns complete V to a unitary matrix and span the exact nullspace
/// complement that a wide matrix always has.
struct SvdFactors {
  CMatrix u;
  std::vector<double> sigma;
  CMatrix v;
  int sweeps = 0;

  std::size_t rows() const { return u.rows(); }
  std::size_t cols() const { return v.rows(); }
  double sigma_max() const { return sigma.empty() ? 0.0 : sigma.front(); }
};

/// Relative singular value cutoff: sigma_i <= tau * sigma_1 counts as zero.
class TruncationPolicy {
 public:
  explicit TruncationPolicy(double tau);
  double tau() const { return tau_; }
  /// Number of singular values kept.
  std::size_t rank(const SvdFactors& f) const;

 private:
  double tau_;
};

struct SvdOptions {
  int max_sweeps = 60;
  double tolerance = 0.0;  // 0 selects rows * machine epsilon
};

SvdFactors svd(const CMatrix& a, SvdOptions opts = {});

/// Minimum-norm truncated least-squares solution
/// sum over kept i of (u_i^H rhs / sigma_i) v_i.
CVector truncated_pinv_apply(const SvdFactors& f, const TruncationPolicy& policy,
                             std::span<const cplx> rhs);

/// Columns of V with sigma_i <= tau sigma_1, plus the completion columns of a
/// wide matrix.
CMatrix nullspace_basis(const SvdFactors& f, const TruncationPolicy& policy);

struct SolveDiagnostics {
  double first_residual = 0.0;       // ||A b + rhs||
  double first_residual_step1 = 0.0; // ||A b0 + rhs||
  double second_objective = 0.0;     // ||B b||
  double second_objective_step1 = 0.0;  // ||B b0||
  double solution_norm = 0.0;        // ||b||
  double correction_norm = 0.0;      // ||N_A y||
  double sigma_max_a = 0.0;
  double sigma_max_bn = 0.0;
  std::size_t rank_a = 0;
  std::size_t rank_bn = 0;
  std::size_t nullspace_dim = 0;
};

struct TwoStepResult {
  CVector b;
  CVector b0;
  SolveDiagnostics report;
};

/// Fits A b ~ -rhs by truncated SVD, then corrects within the truncated
/// nullspace of A to minimise ||B b||.
TwoStepResult two_step_solve(const CMatrix& a, const CMatrix& b, std::span<const cplx> rhs,
                             const TruncationPolicy& tau_a, const TruncationPolicy& tau_b);

/// Dense LU with partial pivoting. Throws std::runtime_error on an exactly
/// singular pivot.
class LuFactorization {
 public:
  explicit LuFactorization(CMatrix a);
  CVector solve(std::span<const cplx> rhs) const;
  std::size_t size() const { return lu_.rows(); }

 private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace cloak::linalg
