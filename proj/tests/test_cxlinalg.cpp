#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "cloak/cxlinalg.hpp"

using namespace cloak::linalg;
using cplx = std::complex<double>;

namespace {

CMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(r, c);
  for (auto& v : a.data()) v = {g(rng), g(rng)};
  return a;
}

CVector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

Eigen::MatrixXcd to_eigen(const CMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

double reconstruction_error(const CMatrix& a, const SvdFactors& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      cplx v{};
      for (std::size_t k = 0; k < f.sigma.size(); ++k) v += f.u(i, k) * f.sigma[k] * std::conj(f.v(j, k));
      s += std::norm(v - a(i, j));
    }
  }
  return std::sqrt(s);
}

double orthogonality_error(const CMatrix& q) {
  double m = 0.0;
  for (std::size_t a = 0; a < q.cols(); ++a) {
    for (std::size_t b = 0; b < q.cols(); ++b) {
      cplx s{};
      for (std::size_t i = 0; i < q.rows(); ++i) s += std::conj(q(i, a)) * q(i, b);
      m = std::max(m, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("svd of simple matrices") {
  const auto f = svd(CMatrix::identity(3));
  REQUIRE(f.sigma.size() == 3);
  for (double s : f.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));

  CMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = cplx(0.0, 2.0);
  const auto g = svd(d);
  CHECK(g.sigma[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(g.sigma[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.sigma[2] == 0.0);
  CHECK(reconstruction_error(d, g) <= 1e-14);
  CHECK(orthogonality_error(g.u) <= 1e-14);
  CHECK(orthogonality_error(g.v) <= 1e-14);
}

TEST_CASE("svd reconstruction and orthogonality on seeded random matrices") {
  for (auto [r, c, seed] : {std::tuple{10u, 7u, 1u}, {50u, 80u, 2u}, {80u, 50u, 3u}, {1u, 5u, 4u}, {6u, 1u, 5u}}) {
    const CMatrix a = random_matrix(r, c, seed);
    const auto f = svd(a);
    CHECK(reconstruction_error(a, f) <= 1e-12 * a.frobenius_norm());
    CHECK(orthogonality_error(f.u) <= 1e-12);
    CHECK(orthogonality_error(f.v) <= 1e-12);
    CHECK(f.v.rows() == c);
    CHECK(f.v.cols() == (c > r ? c : std::min(r, c)));
    for (std::size_t k = 1; k < f.sigma.size(); ++k) CHECK(f.sigma[k] <= f.sigma[k - 1]);

    Eigen::JacobiSVD<Eigen::MatrixXcd> es(to_eigen(a));
    const auto& ref = es.singularValues();
    for (std::size_t k = 0; k < f.sigma.size(); ++k) CHECK(std::abs(f.sigma[k] - ref(k)) <= 1e-12 * ref(0));
  }
}

TEST_CASE("svd of a rank-deficient matrix") {
  const CMatrix x = random_matrix(12, 3, 9), y = random_matrix(3, 9, 10);
  const CMatrix a = multiply(x, y);
  const auto f = svd(a);
  CHECK(reconstruction_error(a, f) <= 1e-12 * a.frobenius_norm());
  CHECK(orthogonality_error(f.u) <= 1e-12);
  CHECK(orthogonality_error(f.v) <= 1e-12);
  for (std::size_t k = 3; k < f.sigma.size(); ++k) CHECK(f.sigma[k] <= 1e-13 * f.sigma[0]);
}

TEST_CASE("svd reports non-convergence with the sweep count") {
  const CMatrix a = random_matrix(20, 20, 11);
  try {
    (void)svd(a, SvdOptions{1, 0.0});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.sweeps() == 1);
  }
  CMatrix bad(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), std::domain_error);
}

TEST_CASE("truncation policy") {
  CHECK_THROWS_AS(TruncationPolicy(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TruncationPolicy(1.0), std::invalid_argument);
  CHECK_THROWS_AS(TruncationPolicy(-1e-3), std::invalid_argument);
  CHECK_NOTHROW(TruncationPolicy(1e-8));
}

TEST_CASE("truncated_pinv_apply examples") {
  const TruncationPolicy tau(1e-8);
  {
    const auto f = svd(CMatrix::identity(2));
    const CVector rhs{1.0, 2.0};
    const auto x = truncated_pinv_apply(f, tau, rhs);
    CHECK(std::abs(x[0] - 1.0) <= 1e-15);
    CHECK(std::abs(x[1] - 2.0) <= 1e-15);
  }
  {
    CMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 1e-14;
    const CVector rhs{4.0, 5.0};
    const auto x = truncated_pinv_apply(svd(d), tau, rhs);
    CHECK(std::abs(x[0] - 2.0) <= 1e-15);
    CHECK(std::abs(x[1]) <= 1e-15);
  }
  {
    // Normal equations for [[1],[1]] x = (1, 3): 2 x = 4.
    CMatrix a(2, 1);
    a(0, 0) = a(1, 0) = 1.0;
    const CVector rhs{1.0, 3.0};
    const auto x = truncated_pinv_apply(svd(a), tau, rhs);
    REQUIRE(x.size() == 1);
    CHECK(std::abs(x[0] - 2.0) <= 1e-14);
  }
  CHECK_THROWS_AS(truncated_pinv_apply(svd(CMatrix::identity(2)), tau, CVector(3)), DimensionError);
}

TEST_CASE("truncated_pinv_apply agrees with a complete orthogonal decomposition") {
  const CMatrix a = random_matrix(15, 22, 21);
  const CVector rhs = random_vector(15, 22);
  const auto x = truncated_pinv_apply(svd(a), TruncationPolicy(1e-12), rhs);
  const Eigen::MatrixXcd ea = to_eigen(a);
  Eigen::VectorXcd er(15);
  for (int i = 0; i < 15; ++i) er(i) = rhs[i];
  const Eigen::VectorXcd ref = ea.completeOrthogonalDecomposition().solve(er);
  for (int i = 0; i < 22; ++i) CHECK(std::abs(x[i] - ref(i)) <= 1e-12 * ref.norm());
}

TEST_CASE("nullspace_basis examples") {
  const TruncationPolicy tau(1e-8);
  CHECK(nullspace_basis(svd(CMatrix::identity(3)), tau).cols() == 0);

  CMatrix w(2, 3);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  const auto n = nullspace_basis(svd(w), tau);
  REQUIRE(n.cols() == 1);
  CHECK(std::abs(std::abs(n(2, 0)) - 1.0) <= 1e-14);
  CHECK(std::abs(n(0, 0)) <= 1e-14);
  CHECK(std::abs(n(1, 0)) <= 1e-14);

  CMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  const auto m = nullspace_basis(svd(d), tau);
  REQUIRE(m.cols() == 1);
  CHECK(std::abs(std::abs(m(1, 0)) - 1.0) <= 1e-14);
  CHECK(std::abs(m(0, 0)) <= 1e-14);
}

TEST_CASE("nullspace basis properties on a wide random matrix") {
  const CMatrix a = random_matrix(8, 20, 31);
  const auto f = svd(a);
  const TruncationPolicy tau(1e-6);
  const auto n = nullspace_basis(f, tau);
  CHECK(n.cols() == 12);
  CHECK(orthogonality_error(n) <= 1e-12);
  const CMatrix an = multiply(a, n);
  for (std::size_t c = 0; c < an.cols(); ++c) CHECK(norm(an.column(c)) <= tau.tau() * f.sigma_max() * (1 + 1e-10));

  // Minimum-norm solutions carry no nullspace component.
  const CVector rhs = random_vector(8, 32);
  const auto x = truncated_pinv_apply(f, tau, rhs);
  for (std::size_t c = 0; c < n.cols(); ++c) {
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(n(i, c)) * x[i];
    CHECK(std::abs(s) <= 1e-10);
  }
}

TEST_CASE("two_step_solve examples") {
  const TruncationPolicy tau(1e-8);
  {
    CMatrix a(1, 2), b(1, 2);
    a(0, 0) = 1.0;
    b(0, 1) = 1.0;
    const CVector rhs{-1.0};
    const auto r = two_step_solve(a, b, rhs, tau, tau);
    CHECK(std::abs(r.b[0] - 1.0) <= 1e-14);
    CHECK(std::abs(r.b[1]) <= 1e-14);
  }
  {
    // Minimising |1 + t / sqrt 2| along (1, -1)/sqrt 2 from (1, 1) gives t = -sqrt 2.
    const double s = std::sqrt(0.5);
    CMatrix a(1, 2), b(1, 2);
    a(0, 0) = a(0, 1) = s;
    b(0, 0) = 1.0;
    const CVector rhs{-std::sqrt(2.0)};
    const auto r = two_step_solve(a, b, rhs, tau, tau);
    CHECK(std::abs(r.b0[0] - 1.0) <= 1e-12);
    CHECK(std::abs(r.b0[1] - 1.0) <= 1e-12);
    CHECK(std::abs(r.b[0] - 0.0) <= 1e-12);
    CHECK(std::abs(r.b[1] - 2.0) <= 1e-12);
    CHECK(r.report.nullspace_dim == 1);
  }
  {
    const CMatrix a = random_matrix(5, 9, 41);
    const CMatrix b(7, 9);
    const CVector rhs = random_vector(5, 42);
    const auto r = two_step_solve(a, b, rhs, tau, tau);
    for (std::size_t i = 0; i < 9; ++i) CHECK(r.b[i] == r.b0[i]);
    CHECK(r.report.correction_norm == 0.0);
  }
  CHECK_THROWS_AS(two_step_solve(CMatrix(2, 3), CMatrix(2, 4), CVector(2), tau, tau), DimensionError);
  CHECK_THROWS_AS(two_step_solve(CMatrix(2, 3), CMatrix(2, 3), CVector(3), tau, tau), DimensionError);
}

TEST_CASE("two_step_solve invariants on random problems") {
  for (std::uint64_t seed = 50; seed < 56; ++seed) {
    const CMatrix a = random_matrix(6, 30, seed), b = random_matrix(20, 30, seed + 100);
    const CVector rhs = random_vector(6, seed + 200);
    const TruncationPolicy ta(1e-3), tb(1e-6);
    const auto r = two_step_solve(a, b, rhs, ta, tb);
    const auto& d = r.report;
    CHECK(d.second_objective <= d.second_objective_step1 * (1 + 1e-12));
    CHECK(d.first_residual <= d.first_residual_step1 + ta.tau() * d.sigma_max_a * d.correction_norm + 1e-12);
    CVector ab = multiply(a, r.b);
    for (std::size_t i = 0; i < ab.size(); ++i) ab[i] += rhs[i];
    CHECK(std::abs(norm(ab) - d.first_residual) <= 1e-12);
    CHECK(std::abs(norm(multiply(b, r.b)) - d.second_objective) <= 1e-12);
    CHECK(std::abs(norm(r.b) - d.solution_norm) <= 1e-12);
    CHECK(d.rank_a == 6);
    CHECK(d.nullspace_dim == 24);
  }
}

TEST_CASE("LU solve") {
  const CMatrix a = random_matrix(12, 12, 61);
  const CVector rhs = random_vector(12, 62);
  const LuFactorization lu(a);
  const auto x = lu.solve(rhs);
  CVector r = multiply(a, x);
  for (std::size_t i = 0; i < 12; ++i) r[i] -= rhs[i];
  CHECK(norm(r) <= 1e-12 * norm(rhs));
  CHECK_THROWS_AS(LuFactorization(CMatrix(3, 3)), std::runtime_error);
  CHECK_THROWS_AS(LuFactorization(CMatrix(3, 2)), DimensionError);
}

TEST_CASE("matrix helpers") {
  const CMatrix a = random_matrix(3, 4, 71);
  const CMatrix h = a.adjoint();
  CHECK(h.rows() == 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(h(j, i) == std::conj(a(i, j)));
  CHECK_THROWS_AS(multiply(a, a), DimensionError);
  CHECK(a.all_finite());
}
