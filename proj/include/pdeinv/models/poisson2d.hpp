// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_POISSON2D_HPP
#define PDEINV_MODELS_POISSON2D_HPP

#include <memory>
#include <vector>

#include "pdeinv/fem.hpp"
#include "pdeinv/galerkin.hpp"
#include "pdeinv/models/common.hpp"

namespace pdeinv::models
{

// −∇·(c∇u) = f_i on [0,1]² with zero Dirichlet data, Gaussian sources
// exp(−a|x − x_i|²) on a ring, and the one-parameter family
//   c(x; θ) = sin²x₁ + sin²x₂ + (1 + 100θ) sin²(10x₁) + sin²(10x₂).
struct Poisson2DOptions
{
  int mesh = 64;
  int num_sources = 40;
  double source_width = 20.0;
  double ring_margin = 0.1;
  galerkin::BasisMode basis = galerkin::BasisMode::FullFem;
  galerkin::InnerProductMode inner_product = galerkin::InnerProductMode::CoefficientIndependent;
  double theta_min = 0.0;
  double theta_max = 2.0;
};

double poisson2d_coefficient(double theta, const fem::Point &x);

// Finite-element matrices shared by both basis modes.
struct Poisson2DSpace
{
  explicit Poisson2DSpace(const Poisson2DOptions &options);

  fem::TriMesh mesh;
  fem::DofMap dofs;
  SparseReal K0;  // stiffness of the θ-independent part of c
  SparseReal K1;  // stiffness of 100 sin²(10x₁)
  SparseReal L;   // unweighted stiffness
  ComplexMatrix F;
};

class Poisson2DFem : public DiscreteForwardModel
{
public:
  explicit Poisson2DFem(Poisson2DOptions options);

  Index num_sources() const override { return space_.F.cols(); }
  Index num_params() const override { return 1; }
  ParamBounds bounds() const override;
  galerkin::DiscreteSystem assemble(const RealVector &theta) const override;
  std::vector<SystemDerivative> derivatives(const RealVector &theta) const override;

  const Poisson2DSpace &space() const { return space_; }

private:
  Poisson2DOptions options_;
  Poisson2DSpace space_;
  std::vector<Eigen::Triplet<Complex>> dK_;
};

class Poisson2DSpan : public SpanForwardModel
{
public:
  explicit Poisson2DSpan(Poisson2DOptions options);

  Index num_sources() const override { return space_.F.cols(); }
  Index num_params() const override { return 1; }
  ParamBounds bounds() const override;
  galerkin::AssembledSystem assemble(const RealVector &theta) const override;
  std::vector<SpanDerivative> derivatives(const RealVector &theta) const override;

private:
  // K(θ)⁻¹F for the coefficient-dependent inner product.
  RealMatrix representers(double theta) const;

  Poisson2DOptions options_;
  Poisson2DSpace space_;
  RealMatrix M_fixed_, A0_, A1_;  // coefficient-independent inner product
};

std::unique_ptr<ForwardModel> make_poisson2d(const Poisson2DOptions &options);

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_POISSON2D_HPP
