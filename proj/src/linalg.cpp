// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/linalg.hpp"

#include <cmath>
#include <sstream>

namespace pdeinv
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::CoefficientNotPositive: return "CoefficientNotPositive";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NotOrthonormalizable: return "NotOrthonormalizable";
    case ErrorKind::AsymmetricData: return "AsymmetricData";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::SingularData: return "SingularData";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::LineSearchFailure: return "LineSearchFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace pdeinv

namespace pdeinv::linalg
{

namespace
{

void require_square(const ComplexMatrix &X, const char *what)
{
  if (X.rows() != X.cols())
  {
    std::ostringstream msg;
    msg << what << " must be square, got " << X.rows() << "x" << X.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

void require_rows(const ComplexMatrix &B, Index n, const char *what)
{
  if (B.rows() != n)
  {
    std::ostringstream msg;
    msg << what << " has " << B.rows() << " rows, expected " << n;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

double max_abs(const ComplexMatrix &X)
{
  return X.size() == 0 ? 0.0 : X.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix &X, double tol)
{
  if (X.rows() != X.cols())
  {
    return false;
  }
  const double scale = max_abs(X);
  return max_abs(X - X.adjoint()) <= tol * scale;
}

ComplexMatrix hermitian_part(const ComplexMatrix &X)
{
  return 0.5 * (X + X.adjoint());
}

HermitianFactorization::HermitianFactorization(const ComplexMatrix &X, double tol)
{
  require_square(X, "Hermitian matrix");
  if (!is_hermitian(X, tol))
  {
    throw Error(ErrorKind::NotPositiveDefinite, "matrix is not Hermitian to tolerance");
  }
  // Eigen reads the lower triangle only; the check above bounds what it ignores.
  llt_.compute(X);
  if (llt_.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot in Cholesky factorization");
  }
  const auto diag = llt_.matrixLLT().diagonal().real();
  if (X.rows() > 0 && !(diag.minCoeff() > 0.0 && std::isfinite(diag.maxCoeff())))
  {
    throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot in Cholesky factorization");
  }
}

ComplexMatrix HermitianFactorization::solve(const ComplexMatrix &B) const
{
  require_rows(B, size(), "right-hand side");
  return llt_.solve(B);
}

double HermitianFactorization::log_determinant() const
{
  return 2.0 * llt_.matrixLLT().diagonal().real().array().log().sum();
}

LUFactorization::LUFactorization(const ComplexMatrix &X, double rcond_min)
{
  require_square(X, "system matrix");
  lu_.compute(X);
  if (X.rows() > 0)
  {
    const double rc = lu_.rcond();
    if (!(rc > rcond_min))
    {
      std::ostringstream msg;
      msg << "reciprocal condition estimate " << rc << " below " << rcond_min;
      throw Error(ErrorKind::SingularSystem, msg.str());
    }
  }
}

ComplexMatrix LUFactorization::solve(const ComplexMatrix &B) const
{
  require_rows(B, size(), "right-hand side");
  return lu_.solve(B);
}

ComplexMatrix LUFactorization::solve_adjoint(const ComplexMatrix &B) const
{
  require_rows(B, size(), "right-hand side");
  return lu_.adjoint().solve(B);
}

ComplexMatrix hermitian_solve(const ComplexMatrix &X, const ComplexMatrix &B, double tol)
{
  return HermitianFactorization(X, tol).solve(B);
}

ComplexMatrix general_solve(const ComplexMatrix &X, const ComplexMatrix &B)
{
  return LUFactorization(X).solve(B);
}

double weighted_trace_form(const ComplexMatrix &E, const ComplexMatrix &W)
{
  require_square(W, "weight");
  require_rows(E, W.rows(), "residual");
  const HermitianFactorization factor(W);
  const ComplexMatrix Y = factor.solve(E);
  const Complex value = 0.5 * (E.adjoint() * Y).trace();
  const double scale = std::max(std::abs(value), 1e-300);
  if (std::abs(value.imag()) > 1e-10 * scale && std::abs(value.imag()) > 1e-12)
  {
    throw Error(ErrorKind::InvariantViolation, "trace form has a non-negligible imaginary part");
  }
  return std::max(value.real(), 0.0);
}

ComplexMatrix floor_eigenvalues(const ComplexMatrix &X, Index *clipped, double *min_eigenvalue)
{
  require_square(X, "Gram estimate");
  const ComplexMatrix H = hermitian_part(X);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(H);
  RealVector values = eig.eigenvalues();
  if (min_eigenvalue != nullptr)
  {
    *min_eigenvalue = values.size() > 0 ? values.minCoeff() : 0.0;
  }
  Index count = 0;
  for (Index i = 0; i < values.size(); ++i)
  {
    if (values(i) < 0.0)
    {
      values(i) = 0.0;
      ++count;
    }
  }
  if (clipped != nullptr)
  {
    *clipped = count;
  }
  if (count == 0)
  {
    return H;
  }
  const ComplexMatrix &V = eig.eigenvectors();
  ComplexMatrix floored = V * values.cast<Complex>().asDiagonal() * V.adjoint();
  return hermitian_part(floored);
}

double min_eigenvalue(const ComplexMatrix &hermitian)
{
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_eigenvalue(const ComplexMatrix &hermitian)
{
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

Orthonormalized orthonormalize(const ComplexMatrix &columns, const InnerProduct &inner,
                               double breakdown)
{
  const Index n = columns.cols();
  Orthonormalized out;
  out.basis = columns;
  out.coefficients = ComplexMatrix::Identity(n, n);
  for (Index j = 0; j < n; ++j)
  {
    const double original = std::sqrt(std::abs(inner(columns.col(j), columns.col(j))));
    for (Index i = 0; i < j; ++i)
    {
      const Complex proj = inner(out.basis.col(j), out.basis.col(i));
      out.basis.col(j) -= proj * out.basis.col(i);
      out.coefficients.col(j) -= proj * out.coefficients.col(i);
    }
    const double norm = std::sqrt(std::abs(inner(out.basis.col(j), out.basis.col(j))));
    if (!(norm > breakdown * original) || original == 0.0)
    {
      std::ostringstream msg;
      msg << "column " << j << " is linearly dependent on its predecessors";
      throw Error(ErrorKind::NotOrthonormalizable, msg.str());
    }
    out.basis.col(j) /= norm;
    out.coefficients.col(j) /= norm;
  }
  return out;
}

}  // namespace pdeinv::linalg
