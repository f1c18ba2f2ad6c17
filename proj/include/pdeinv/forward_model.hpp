// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_FORWARD_MODEL_HPP
#define PDEINV_FORWARD_MODEL_HPP

#include <memory>
#include <optional>
#include <vector>

#include "pdeinv/galerkin.hpp"
#include "pdeinv/types.hpp"

namespace pdeinv
{

// Box constraints on the parameter vector θ.
struct ParamBounds
{
  RealVector lower;
  RealVector upper;

  RealVector project(const RealVector &theta) const;
  bool contains(const RealVector &theta) const;
};

// Simulated data P(θ) and, when requested, the model Gram G(θ).
struct Evaluation
{
  ComplexMatrix predicted;
  std::optional<ComplexMatrix> gram;
};

// A forward model linearized at one θ. `contract` returns, for every k,
//   g_k = Re tr(Y ∂P/∂θ_k) + ½ tr(X ∂G/∂θ_k),
// which is the only form in which objectives need derivatives. An empty X
// skips the Gram term.
class Linearization
{
public:
  virtual ~Linearization() = default;

  const Evaluation &evaluation() const { return evaluation_; }
  virtual RealVector contract(const ComplexMatrix &Y, const ComplexMatrix &X) const = 0;

protected:
  Evaluation evaluation_;
};

// Linearization with explicit dense derivatives ∂P/∂θ_k and ∂G/∂θ_k, used by
// models with closed-form solutions.
class DenseLinearization : public Linearization
{
public:
  DenseLinearization(Evaluation evaluation, std::vector<ComplexMatrix> dP,
                     std::vector<ComplexMatrix> dG);

  RealVector contract(const ComplexMatrix &Y, const ComplexMatrix &X) const override;

private:
  std::vector<ComplexMatrix> dP_;
  std::vector<ComplexMatrix> dG_;
};

class ForwardModel
{
public:
  virtual ~ForwardModel() = default;

  virtual Index num_sources() const = 0;
  virtual Index num_params() const = 0;
  virtual ParamBounds bounds() const = 0;
  virtual std::unique_ptr<Linearization> linearize(const RealVector &theta, bool with_gram) const = 0;

  Evaluation evaluate(const RealVector &theta, bool with_gram) const;
};

// Sparse derivative of a discrete system with respect to one parameter.
struct SystemDerivative
{
  std::vector<Eigen::Triplet<Complex>> dK;
  std::vector<Eigen::Triplet<Complex>> dR;  // empty for a coefficient-independent inner product
};

// Triplets of `scale`·X, the form SystemDerivative expects.
std::vector<Eigen::Triplet<Complex>> to_triplets(const SparseReal &X, Complex scale = 1.0);

// Forward model backed by a full discretization. Derivatives use the
// adjoint-state method: one extra batch of transpose solves for the data term
// and one batch of solves for the Gram term.
class DiscreteForwardModel : public ForwardModel
{
public:
  virtual galerkin::DiscreteSystem assemble(const RealVector &theta) const = 0;
  virtual std::vector<SystemDerivative> derivatives(const RealVector &theta) const = 0;

  std::unique_ptr<Linearization> linearize(const RealVector &theta, bool with_gram) const override;
  std::unique_ptr<galerkin::DiscreteSolution> solve(const RealVector &theta) const;
};

struct SpanDerivative
{
  ComplexMatrix dM;
  ComplexMatrix dA;
};

// Forward model on span{p_i}; derivatives by direct differentiation of
// P = M A⁻¹ M and G = M A⁻¹ M A⁻* M.
class SpanForwardModel : public ForwardModel
{
public:
  virtual galerkin::AssembledSystem assemble(const RealVector &theta) const = 0;
  virtual std::vector<SpanDerivative> derivatives(const RealVector &theta) const = 0;

  std::unique_ptr<Linearization> linearize(const RealVector &theta, bool with_gram) const override;
};

}  // namespace pdeinv

#endif  // PDEINV_FORWARD_MODEL_HPP
