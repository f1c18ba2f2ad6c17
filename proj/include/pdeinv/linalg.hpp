// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_LINALG_HPP
#define PDEINV_LINALG_HPP

#include <functional>

#include "pdeinv/types.hpp"

namespace pdeinv::linalg
{

inline constexpr double kHermitianTol = 1e-12;

double max_abs(const ComplexMatrix &X);

// ‖X − X*‖_max ≤ tol·‖X‖_max. Non-square matrices are never Hermitian.
bool is_hermitian(const ComplexMatrix &X, double tol = kHermitianTol);

ComplexMatrix hermitian_part(const ComplexMatrix &X);

// Cholesky factor of a Hermitian positive-definite matrix. Construction fails
// with NotPositiveDefinite on a non-positive pivot.
class HermitianFactorization
{
public:
  explicit HermitianFactorization(const ComplexMatrix &X, double tol = kHermitianTol);

  Index size() const { return llt_.rows(); }
  ComplexMatrix solve(const ComplexMatrix &B) const;
  // log det X, real for a Hermitian PD matrix.
  double log_determinant() const;

private:
  Eigen::LLT<ComplexMatrix> llt_;
};

// Partial-pivot LU for general square systems such as the complex-symmetric
// Helmholtz matrices. A reciprocal condition estimate below `rcond_min`
// raises SingularSystem.
class LUFactorization
{
public:
  explicit LUFactorization(const ComplexMatrix &X, double rcond_min = 1e-15);

  Index size() const { return lu_.rows(); }
  ComplexMatrix solve(const ComplexMatrix &B) const;
  // Solves X* Y = B.
  ComplexMatrix solve_adjoint(const ComplexMatrix &B) const;
  double rcond() const { return lu_.rcond(); }

private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

ComplexMatrix hermitian_solve(const ComplexMatrix &X, const ComplexMatrix &B,
                              double tol = kHermitianTol);

ComplexMatrix general_solve(const ComplexMatrix &X, const ComplexMatrix &B);

// ½·trace(E* W⁻¹ E) for Hermitian PD W.
double weighted_trace_form(const ComplexMatrix &E, const ComplexMatrix &W);

// Symmetrize to ½(X + X*), then clip negative eigenvalues to zero. Returns the
// number of eigenvalues that were clipped through `clipped` when non-null.
ComplexMatrix floor_eigenvalues(const ComplexMatrix &X, Index *clipped = nullptr,
                                double *min_eigenvalue = nullptr);

double min_eigenvalue(const ComplexMatrix &hermitian);
double max_eigenvalue(const ComplexMatrix &hermitian);

// Sesquilinear inner product ⟨x, y⟩, linear in x and antilinear in y.
using InnerProduct = std::function<Complex(const ComplexVector &, const ComplexVector &)>;

struct Orthonormalized
{
  ComplexMatrix basis;  // orthonormal columns
  ComplexMatrix coefficients;  // basis = input · coefficients (upper triangular)
};

// Modified Gram–Schmidt. A column whose remaining norm falls below
// `breakdown`·(original norm) raises NotOrthonormalizable.
Orthonormalized orthonormalize(const ComplexMatrix &columns, const InnerProduct &inner,
                               double breakdown = 1e-10);

}  // namespace pdeinv::linalg

#endif  // PDEINV_LINALG_HPP
