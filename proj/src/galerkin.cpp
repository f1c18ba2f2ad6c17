// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/galerkin.hpp"

#include <cmath>
#include <sstream>

#include "pdeinv/linalg.hpp"

namespace pdeinv::galerkin
{

namespace
{

void require(bool ok, ErrorKind kind, const std::string &what)
{
  if (!ok)
  {
    throw Error(kind, what);
  }
}

SparseComplex dense_to_sparse(const ComplexMatrix &X)
{
  return X.sparseView(Complex(0.0), 0.0);
}

}  // namespace

void validate(const AssembledSystem &sys)
{
  const Index n = sys.M.rows();
  require(sys.M.cols() == n, ErrorKind::DimensionMismatch, "M must be square");
  require(sys.A.rows() == n && sys.A.cols() == n, ErrorKind::DimensionMismatch,
          "A must match the size of M");
  (void)linalg::HermitianFactorization(sys.M);
}

ComplexMatrix forward_solve(const AssembledSystem &sys)
{
  validate(sys);
  return linalg::LUFactorization(sys.A).solve(sys.M).conjugate();
}

ComplexMatrix adjoint_solve(const AssembledSystem &sys)
{
  validate(sys);
  return linalg::LUFactorization(sys.A).solve_adjoint(sys.M).conjugate();
}

ComplexMatrix predicted_data(const AssembledSystem &sys)
{
  validate(sys);
  return sys.M * linalg::LUFactorization(sys.A).solve(sys.M);
}

ComplexMatrix residual_matrix(const AssembledSystem &sys, const ComplexMatrix &D)
{
  require(D.rows() == sys.size() && D.cols() == sys.size(), ErrorKind::DimensionMismatch,
          "data matrix does not match the system size");
  return D - predicted_data(sys);
}

ComplexMatrix gram_variable(const AssembledSystem &sys)
{
  validate(sys);
  const ComplexMatrix X = linalg::LUFactorization(sys.A).solve_adjoint(sys.M);  // A⁻* M
  return linalg::hermitian_part(X.adjoint() * sys.M * X);
}

ComplexMatrix gram_from_states(const ComplexMatrix &W, const ComplexMatrix &M)
{
  require(M.rows() == M.cols() && W.rows() == M.rows(), ErrorKind::DimensionMismatch,
          "states do not match the inner-product matrix");
  return linalg::hermitian_part(W.transpose() * M * W.conjugate());
}

DiscreteSolution::DiscreteSolution(DiscreteSystem system) : system_(std::move(system))
{
  const Index n = system_.K.rows();
  require(system_.K.cols() == n, ErrorKind::DimensionMismatch, "K must be square");
  require(system_.F.rows() == n, ErrorKind::DimensionMismatch, "F must have one row per basis function");
  require(system_.R.rows() == n && system_.R.cols() == n, ErrorKind::DimensionMismatch,
          "R must match K");
  system_.K.makeCompressed();
  lu_.analyzePattern(system_.K);
  lu_.factorize(system_.K);
  if (lu_.info() != Eigen::Success)
  {
    throw Error(ErrorKind::SingularSystem, "sparse LU failed: " + lu_.lastErrorMessage());
  }
  states_ = lu_.solve(system_.F);
  if (!states_.allFinite())
  {
    throw Error(ErrorKind::SingularSystem, "non-finite forward states");
  }
}

const ComplexMatrix &DiscreteSolution::adjoint_states() const
{
  if (!adjoint_states_)
  {
    adjoint_states_ = solve_adjoint(system_.F);
  }
  return *adjoint_states_;
}

ComplexMatrix DiscreteSolution::predicted_data() const
{
  return system_.F.transpose() * states_.conjugate();
}

ComplexMatrix DiscreteSolution::gram() const
{
  const ComplexMatrix &W = adjoint_states();
  const ComplexMatrix RW = system_.R * W;
  return linalg::hermitian_part((W.adjoint() * RW).conjugate());
}

ComplexMatrix DiscreteSolution::solve(const ComplexMatrix &B) const
{
  return lu_.solve(B);
}

ComplexMatrix DiscreteSolution::solve_transpose(const ComplexMatrix &B) const
{
  return lu_.transpose().solve(B);
}

ComplexMatrix DiscreteSolution::solve_adjoint(const ComplexMatrix &B) const
{
  return lu_.adjoint().solve(B);
}

Complex DiscreteSolution::inner(const ComplexVector &x, const ComplexVector &y) const
{
  return y.dot(system_.R * x);  // dot conjugates its left operand
}

SpanReduction reduce_to_span(const DiscreteSystem &full, const SparseComplex &riesz,
                             InnerProductMode mode, const SparseReal *mass,
                             const std::vector<SparseReal> *potential_modes)
{
  SparseComplex riesz_c = riesz;
  riesz_c.makeCompressed();
  Eigen::SparseLU<SparseComplex> lu;
  lu.compute(riesz_c);
  if (lu.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "inner-product matrix is singular");
  }
  SpanReduction out;
  out.representers = lu.solve(full.F);
  const ComplexMatrix &p = out.representers;

  AssembledSystem &sys = out.system;
  sys.inner_product = mode;
  sys.M = linalg::hermitian_part((p.adjoint() * (riesz_c * p)).transpose());
  sys.A = (p.adjoint() * (full.K * p)).conjugate();
  if (mass != nullptr)
  {
    const ComplexMatrix Mp = to_complex(*mass) * p;
    sys.S = linalg::hermitian_part((p.adjoint() * Mp).transpose());
  }
  if (potential_modes != nullptr)
  {
    for (const auto &mode_matrix : *potential_modes)
    {
      const ComplexMatrix h = (p.adjoint() * (to_complex(mode_matrix) * p)).transpose();
      RealMatrix hr = h.real();
      sys.H.push_back(0.5 * (hr + hr.transpose()));
    }
  }
  return out;
}

DiscreteSystem as_discrete(const AssembledSystem &sys)
{
  DiscreteSystem out;
  out.K = dense_to_sparse(sys.A.conjugate());
  out.F = sys.M.transpose();
  out.R = dense_to_sparse(sys.M.transpose());
  return out;
}

SparseComplex to_complex(const SparseReal &X)
{
  return X.cast<Complex>();
}

}  // namespace pdeinv::galerkin
