// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_HELMHOLTZ1D_HPP
#define PDEINV_MODELS_HELMHOLTZ1D_HPP

#include <memory>
#include <vector>

#include "pdeinv/fem.hpp"
#include "pdeinv/galerkin.hpp"
#include "pdeinv/models/common.hpp"

namespace pdeinv::models
{

// −u″ − (k/c)²u = δ(· − x_i) on (0, 1), u(0) = 0, u′(1) − i(k/c(1))u(1) = 0,
// with ⟨u, v⟩_U = ∫ u′ conj(v′) and d_ij = ∫ f_i conj(u_j) = conj(u_j(x_i)).
struct Helmholtz1DOptions
{
  enum class Discretization
  {
    Analytic,  // constant c, closed-form states; θ = (c)
    Fem,       // P1 elements, c(x; θ) from CosineFamily
  };

  double k = 10.0;
  std::vector<double> sources = uniform_interior_points(10);
  Discretization discretization = Discretization::Analytic;
  int num_params = 1;
  RealVector lower;  // defaults: c or θ_0 ∈ [0.5, 2], θ_k ∈ [−0.2, 0.2]
  RealVector upper;
  double min_coefficient = 0.05;
  int cells = 512;

  ParamBounds bounds() const;
};

// The closed-form state for constant c:
//   (k/c)⁻¹ sin((k/c)x) e^{i(k/c)x_i} for x ≤ x_i, (k/c)⁻¹ sin((k/c)x_i) e^{i(k/c)x} otherwise.
Complex helmholtz1d_analytic(double x, double x_i, double k, double c);

class Helmholtz1DAnalytic : public ForwardModel
{
public:
  explicit Helmholtz1DAnalytic(Helmholtz1DOptions options);

  Index num_sources() const override { return static_cast<Index>(options_.sources.size()); }
  Index num_params() const override { return 1; }
  ParamBounds bounds() const override { return options_.bounds(); }
  std::unique_ptr<Linearization> linearize(const RealVector &theta, bool with_gram) const override;

  // b_i = u_i(1).
  ComplexVector boundary_traces(const RealVector &theta) const;
  // c(1), which the data-driven Gram needs.
  double boundary_speed(const RealVector &theta) const { return theta(0); }

private:
  Helmholtz1DOptions options_;
};

class Helmholtz1DFem : public DiscreteForwardModel
{
public:
  explicit Helmholtz1DFem(Helmholtz1DOptions options);

  Index num_sources() const override { return static_cast<Index>(options_.sources.size()); }
  Index num_params() const override { return options_.num_params; }
  ParamBounds bounds() const override { return options_.bounds(); }
  galerkin::DiscreteSystem assemble(const RealVector &theta) const override;
  std::vector<SystemDerivative> derivatives(const RealVector &theta) const override;

  ComplexVector boundary_traces(const RealVector &theta) const;
  double boundary_speed(const RealVector &theta) const;
  const fem::Mesh1D &mesh() const { return mesh_; }

private:
  Helmholtz1DOptions options_;
  fem::Mesh1D mesh_;
  fem::DofMap dofs_;
  ComplexMatrix loads_;
  SparseReal stiffness_;
};

std::unique_ptr<ForwardModel> make_helmholtz1d(const Helmholtz1DOptions &options);

// Data D(k) and traces b(k) at every wavenumber of `grid` for the true θ.
MeasurementSet helmholtz1d_synthesize(const Helmholtz1DOptions &options, const RealVector &theta,
                                      const std::vector<double> &grid);

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_HELMHOLTZ1D_HPP
