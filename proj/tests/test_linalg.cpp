// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdeinv/linalg.hpp"

using namespace pdeinv;
using namespace pdeinv::linalg;

TEST_CASE("hermitian_solve on the identity returns the right-hand side")
{
  std::mt19937_64 rng(1);
  const ComplexMatrix B = oracle::random_complex(3, 2, rng);
  CHECK((hermitian_solve(ComplexMatrix::Identity(3, 3), B) - B).norm() == 0.0);
}

TEST_CASE("hermitian_solve on a diagonal matrix")
{
  ComplexMatrix X = ComplexMatrix::Zero(2, 2);
  X(0, 0) = 2.0;
  X(1, 1) = 4.0;
  ComplexMatrix B(2, 1);
  B << 2.0, 4.0;
  const ComplexMatrix Y = hermitian_solve(X, B);
  CHECK(std::abs(Y(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(Y(1, 0) - 1.0) < 1e-15);
}

TEST_CASE("hermitian_solve matches Gaussian elimination entrywise")
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial)
  {
    const ComplexMatrix X = oracle::random_hermitian_psd(5, rng, 0.5);
    const ComplexMatrix B = oracle::random_complex(5, 3, rng);
    const ComplexMatrix Y = hermitian_solve(X, B);
    const ComplexMatrix ref = oracle::eliminate(X, B);
    CHECK((Y - ref).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((X * Y - B).norm() <= 1e-10 * B.norm());
  }
}

TEST_CASE("hermitian_solve rejects indefinite, non-Hermitian and misshaped input")
{
  ComplexMatrix X = ComplexMatrix::Identity(2, 2);
  X(1, 1) = -1.0;
  CHECK_THROWS_AS(hermitian_solve(X, ComplexMatrix::Ones(2, 1)), Error);
  try
  {
    hermitian_solve(X, ComplexMatrix::Ones(2, 1));
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
  ComplexMatrix Y = ComplexMatrix::Identity(2, 2);
  Y(0, 1) = 0.5;
  CHECK_THROWS_AS(hermitian_solve(Y, ComplexMatrix::Ones(2, 1)), Error);
  try
  {
    hermitian_solve(ComplexMatrix::Identity(2, 2), ComplexMatrix::Ones(3, 1));
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

ComplexMatrix conditioned(Index n, double cond, std::mt19937_64 &rng)
{
  const ComplexMatrix Q = oracle::random_unitary(n, rng);
  RealVector d(n);
  for (Index i = 0; i < n; ++i)
  {
    d(i) = std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return hermitian_part(Q * d.cast<Complex>().asDiagonal() * Q.adjoint());
}

TEST_CASE("solve after multiply is the identity to 1e-10 for moderate conditioning")
{
  std::mt19937_64 rng(3);
  for (double cond : {1.0, 1e2, 1e4, 1e5})
  {
    const ComplexMatrix X = conditioned(6, cond, rng);
    const ComplexMatrix B = oracle::random_complex(6, 2, rng);
    CHECK((X * hermitian_solve(X, B) - B).norm() <= 1e-10 * B.norm());
    CHECK((hermitian_solve(X, X * B) - B).norm() <= 1e-10 * B.norm());
  }
}

TEST_CASE("solve is backward stable up to condition number 1e8")
{
  // At κ = 1e8 double rounding alone perturbs solutions by about κ·u ≈ 1e-8,
  // so the bound is stated relative to ‖X‖‖Y‖.
  std::mt19937_64 rng(4);
  for (double cond : {1e6, 1e7, 1e8})
  {
    const ComplexMatrix X = conditioned(6, cond, rng);
    const ComplexMatrix B = oracle::random_complex(6, 2, rng);
    const ComplexMatrix Y = hermitian_solve(X, B);
    CHECK((X * Y - B).norm() <= 1e-10 * X.norm() * Y.norm());
    CHECK((hermitian_solve(X, X * B) - B).norm() <= 1e-14 * cond * B.norm() * 100.0);
  }
}

TEST_CASE("weighted_trace_form small cases")
{
  const ComplexMatrix I2 = ComplexMatrix::Identity(2, 2);
  CHECK(weighted_trace_form(ComplexMatrix::Zero(2, 1), I2) == 0.0);
  CHECK(weighted_trace_form(ComplexMatrix::Ones(2, 1), I2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("weighted_trace_form matches an elimination oracle and its invariants")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial)
  {
    const ComplexMatrix W = oracle::random_hermitian_psd(3, rng, 0.1);
    const ComplexMatrix E = oracle::random_complex(3, 4, rng);
    const double value = weighted_trace_form(E, W);
    const double ref = 0.5 * (E.adjoint() * oracle::inverse(W) * E).trace().real();
    CHECK(std::abs(value - ref) <= 1e-10 * std::abs(ref));
    CHECK(value >= 0.0);
    const ComplexMatrix Q = oracle::random_unitary(3, rng);
    const double rotated = weighted_trace_form(Q.adjoint() * E, hermitian_part(Q.adjoint() * W * Q));
    CHECK(std::abs(rotated - value) <= 1e-10 * value);
  }
}

TEST_CASE("LU factorization solves and adjoint-solves general systems")
{
  std::mt19937_64 rng(5);
  const ComplexMatrix X = oracle::random_complex(4, 4, rng) + 4.0 * ComplexMatrix::Identity(4, 4);
  const ComplexMatrix B = oracle::random_complex(4, 2, rng);
  const LUFactorization lu(X);
  CHECK((lu.solve(B) - oracle::eliminate(X, B)).norm() <= 1e-12 * B.norm());
  CHECK((lu.solve_adjoint(B) - oracle::eliminate(X.adjoint(), B)).norm() <= 1e-12 * B.norm());
  CHECK_THROWS_AS(LUFactorization(ComplexMatrix::Zero(3, 3)), Error);
}

TEST_CASE("floor_eigenvalues symmetrizes and clips negative eigenvalues")
{
  ComplexMatrix X(2, 2);
  X << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and −1
  Index clipped = 0;
  double min_eig = 0.0;
  const ComplexMatrix F = floor_eigenvalues(X, &clipped, &min_eig);
  CHECK(clipped == 1);
  CHECK(min_eig == doctest::Approx(-1.0));
  CHECK(min_eigenvalue(F) >= -1e-14);
  CHECK(max_eigenvalue(F) == doctest::Approx(3.0));
  CHECK(is_hermitian(F));
}

TEST_CASE("orthonormalize produces an orthonormal basis under a weighted inner product")
{
  std::mt19937_64 rng(6);
  const ComplexMatrix R = oracle::random_hermitian_psd(5, rng, 1.0);
  const ComplexMatrix P = oracle::random_complex(5, 3, rng);
  const InnerProduct inner = [&](const ComplexVector &x, const ComplexVector &y) {
    return y.dot(R * x);
  };
  const auto o = orthonormalize(P, inner);
  const ComplexMatrix gram = o.basis.adjoint() * R * o.basis;
  CHECK((gram - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK((P * o.coefficients - o.basis).norm() <= 1e-12);

  ComplexMatrix dependent = P;
  dependent.col(2) = P.col(0) + P.col(1);
  CHECK_THROWS_AS(orthonormalize(dependent, inner), Error);
}
