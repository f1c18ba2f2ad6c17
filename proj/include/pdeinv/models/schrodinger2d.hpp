// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_SCHRODINGER2D_HPP
#define PDEINV_MODELS_SCHRODINGER2D_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "pdeinv/fem.hpp"
#include "pdeinv/galerkin.hpp"
#include "pdeinv/models/common.hpp"

namespace pdeinv::models
{

// −∇²u + c u − λu = f_i on [0,1]² with zero Dirichlet data, Gaussian sources
// exp(−a|x − x_i|²) on a ring, and c(x) = Σ_k c_k ψ_k(x) with
// ψ_k(x) = sin²(k x₁) + sin²(k x₂), k = 1..n′.
struct Schrodinger2DOptions
{
  int mesh = 40;
  int num_sources = 40;
  double source_width = 1.0;
  double ring_margin = 0.1;
  double ring_phase = 0.5;  // keeps every center off the diagonal x₁ = x₂
  double lambda = 1.0;
  int num_modes = 10;
  double coeff_min = 0.0;
  double coeff_max = 1.0;
  galerkin::BasisMode basis = galerkin::BasisMode::SpanOfSources;
  galerkin::InnerProductMode inner_product = galerkin::InnerProductMode::CoefficientIndependent;
};

double schrodinger_mode(int k, const fem::Point &x);

// Seeded uniform(coeff_min, coeff_max) draw of the true coefficients.
RealVector schrodinger_random_coefficients(const Schrodinger2DOptions &options, std::uint64_t seed);

struct Schrodinger2DSpace
{
  explicit Schrodinger2DSpace(const Schrodinger2DOptions &options);

  fem::TriMesh mesh;
  fem::DofMap dofs;
  SparseReal L;                    // ∫∇φ·∇φ
  SparseReal mass;                 // ∫φφ
  std::vector<SparseReal> modes;   // ∫ψ_k φφ
  ComplexMatrix F;
};

class Schrodinger2DFem : public DiscreteForwardModel
{
public:
  explicit Schrodinger2DFem(Schrodinger2DOptions options);

  Index num_sources() const override { return space_->F.cols(); }
  Index num_params() const override { return options_.num_modes; }
  ParamBounds bounds() const override;
  galerkin::DiscreteSystem assemble(const RealVector &theta) const override;
  std::vector<SystemDerivative> derivatives(const RealVector &theta) const override;

  const Schrodinger2DSpace &space() const { return *space_; }
  // The same model at another spectral value, sharing the assembled space.
  Schrodinger2DFem at_lambda(double lambda) const;

private:
  Schrodinger2DFem(Schrodinger2DOptions options, std::shared_ptr<const Schrodinger2DSpace> space);

  Schrodinger2DOptions options_;
  std::shared_ptr<const Schrodinger2DSpace> space_;
};

class Schrodinger2DSpan : public SpanForwardModel
{
public:
  explicit Schrodinger2DSpan(Schrodinger2DOptions options);

  Index num_sources() const override { return M_.rows(); }
  Index num_params() const override { return options_.num_modes; }
  ParamBounds bounds() const override;
  // M, S, H and A(c) = M + Σ c_k H_k − λS.
  galerkin::AssembledSystem assemble(const RealVector &theta) const override;
  std::vector<SpanDerivative> derivatives(const RealVector &theta) const override;

  const Schrodinger2DSpace &space() const { return space_; }

private:
  Schrodinger2DOptions options_;
  Schrodinger2DSpace space_;
  RealMatrix M_, S_;
  std::vector<RealMatrix> H_;
};

std::unique_ptr<ForwardModel> make_schrodinger2d(const Schrodinger2DOptions &options);

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_SCHRODINGER2D_HPP
