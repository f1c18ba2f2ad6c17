// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the unit tests. Nothing here calls
// into the library's solvers.

#ifndef PDEINV_TESTS_ORACLES_HPP
#define PDEINV_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "pdeinv/types.hpp"

namespace oracle
{

using pdeinv::Complex;
using pdeinv::ComplexMatrix;
using pdeinv::Index;
using pdeinv::RealVector;

// Gauss–Jordan elimination with partial pivoting, written out by hand.
inline ComplexMatrix eliminate(ComplexMatrix X, ComplexMatrix B)
{
  const Index n = X.rows();
  for (Index col = 0; col < n; ++col)
  {
    Index pivot = col;
    for (Index r = col + 1; r < n; ++r)
    {
      if (std::abs(X(r, col)) > std::abs(X(pivot, col)))
      {
        pivot = r;
      }
    }
    X.row(col).swap(X.row(pivot));
    B.row(col).swap(B.row(pivot));
    const Complex d = X(col, col);
    for (Index c = 0; c < n; ++c)
    {
      X(col, c) /= d;
    }
    for (Index c = 0; c < B.cols(); ++c)
    {
      B(col, c) /= d;
    }
    for (Index r = 0; r < n; ++r)
    {
      if (r == col)
      {
        continue;
      }
      const Complex f = X(r, col);
      for (Index c = 0; c < n; ++c)
      {
        X(r, c) -= f * X(col, c);
      }
      for (Index c = 0; c < B.cols(); ++c)
      {
        B(r, c) -= f * B(col, c);
      }
    }
  }
  return B;
}

inline ComplexMatrix inverse(const ComplexMatrix &X)
{
  return eliminate(X, ComplexMatrix::Identity(X.rows(), X.rows()));
}

inline ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix X(rows, cols);
  for (Index j = 0; j < cols; ++j)
  {
    for (Index i = 0; i < rows; ++i)
    {
      X(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  return X;
}

// B B* + shift·I for a random square B: Hermitian positive (semi)definite.
inline ComplexMatrix random_hermitian_psd(Index n, std::mt19937_64 &rng, double shift = 0.0,
                                          Index rank = -1)
{
  const ComplexMatrix B = random_complex(n, rank < 0 ? n : rank, rng);
  ComplexMatrix X = B * B.adjoint();
  X += shift * ComplexMatrix::Identity(n, n);
  return 0.5 * (X + X.adjoint());
}

inline ComplexMatrix random_unitary(Index n, std::mt19937_64 &rng)
{
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Central finite-difference gradient of f at θ with step h.
inline RealVector fd_gradient(const std::function<double(const RealVector &)> &f,
                              const RealVector &theta, double h)
{
  RealVector g(theta.size());
  for (Index k = 0; k < theta.size(); ++k)
  {
    RealVector tp = theta, tm = theta;
    tp(k) += h;
    tm(k) -= h;
    g(k) = (f(tp) - f(tm)) / (2.0 * h);
  }
  return g;
}

inline double rel_err(const ComplexMatrix &a, const ComplexMatrix &b)
{
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace oracle

#endif  // PDEINV_TESTS_ORACLES_HPP
