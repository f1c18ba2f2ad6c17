// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_TYPES_HPP
#define PDEINV_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pdeinv
{

using Complex = std::complex<double>;
using Index = Eigen::Index;

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseComplex = Eigen::SparseMatrix<Complex>;
using SparseReal = Eigen::SparseMatrix<double>;

// Every failure mode the library reports. The CLI maps kinds to exit codes.
enum class ErrorKind
{
  DimensionMismatch,
  NotPositiveDefinite,
  SingularSystem,
  CoefficientNotPositive,
  QuadratureFailure,
  NotOrthonormalizable,
  AsymmetricData,
  StepTooLarge,
  SingularData,
  RankDeficient,
  LineSearchFailure,
  InvalidArgument,
  ConfigError,
  InvariantViolation,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace pdeinv

#endif  // PDEINV_TYPES_HPP
