// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_ELLIPTIC1D_HPP
#define PDEINV_MODELS_ELLIPTIC1D_HPP

#include <memory>
#include <vector>

#include "pdeinv/fem.hpp"
#include "pdeinv/galerkin.hpp"
#include "pdeinv/models/common.hpp"

namespace pdeinv::models
{

// −(c u′)′ = δ(· − x_i) on (0, 1) with u(0) = u(1) = 0 and c(x; θ) from
// CosineFamily. Measurements d_ij = u_j(x_i).
struct Elliptic1DOptions
{
  enum class Discretization
  {
    Analytic,  // Green's function through Φ(x) = ∫₀ˣ 1/c
    Fem,       // P1 elements with point loads
  };

  std::vector<double> sources = uniform_interior_points(5);
  int num_params = 3;
  RealVector lower;  // defaults: θ_0 ∈ [0.5, 2], θ_k ∈ [−0.2, 0.2]
  RealVector upper;
  double min_coefficient = 0.05;
  Discretization discretization = Discretization::Analytic;
  int cells = 256;
  galerkin::InnerProductMode inner_product = galerkin::InnerProductMode::CoefficientDependent;

  ParamBounds bounds() const;
};

// Green's function value G(x, y) for the coefficient c(·; θ).
double elliptic1d_green(const RealVector &theta, double x, double y);

class Elliptic1DAnalytic : public ForwardModel
{
public:
  explicit Elliptic1DAnalytic(Elliptic1DOptions options);

  Index num_sources() const override { return static_cast<Index>(options_.sources.size()); }
  Index num_params() const override { return options_.num_params; }
  ParamBounds bounds() const override { return options_.bounds(); }
  std::unique_ptr<Linearization> linearize(const RealVector &theta, bool with_gram) const override;

private:
  Elliptic1DOptions options_;
};

class Elliptic1DFem : public DiscreteForwardModel
{
public:
  explicit Elliptic1DFem(Elliptic1DOptions options);

  Index num_sources() const override { return static_cast<Index>(options_.sources.size()); }
  Index num_params() const override { return options_.num_params; }
  ParamBounds bounds() const override { return options_.bounds(); }
  galerkin::DiscreteSystem assemble(const RealVector &theta) const override;
  std::vector<SystemDerivative> derivatives(const RealVector &theta) const override;

  const fem::Mesh1D &mesh() const { return mesh_; }
  const fem::DofMap &dofs() const { return dofs_; }

private:
  Elliptic1DOptions options_;
  fem::Mesh1D mesh_;
  fem::DofMap dofs_;
  ComplexMatrix loads_;
  std::vector<SparseReal> mode_stiffness_;
  SparseReal unit_stiffness_;
};

std::unique_ptr<ForwardModel> make_elliptic1d(const Elliptic1DOptions &options);

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_ELLIPTIC1D_HPP
