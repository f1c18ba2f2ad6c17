// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_SEISMIC2D_HPP
#define PDEINV_MODELS_SEISMIC2D_HPP

#include <functional>
#include <memory>
#include <vector>

#include "pdeinv/galerkin.hpp"
#include "pdeinv/models/common.hpp"

namespace pdeinv::models
{

// ∇²u + ω²c(x)⁻²u = f_i on [0, width] × [0, depth] (z pointing down), ω = 2π·frequency,
// discretized by the 5-point stencil with complex-stretched PML layers
// s(d) = 1 + iσ(d)/ω, σ(d) = σ_max(d/L)², outside the left, right and bottom
// edges and optionally above the top. Without the top layer the surface is
// free (u = 0). Sources and receivers coincide: unit-mass Gaussians of
// standard deviation `source_sigma` on a horizontal line.
struct Seismic2DOptions
{
  double width = 5.0;
  double depth = 1.5;
  double spacing = 0.02;
  int pml_cells = 20;
  double pml_reflection = 1e-6;  // nominal normal-incidence reflection of the layer
  double pml_velocity = 4.0;
  bool absorbing_top = false;
  double frequency = 4.0;
  int num_sources = 31;
  double source_depth = 0.04;
  double source_x_min = 0.1;
  double source_x_max = 4.9;
  double source_sigma = 0.04;
  // Pairings of sources, receivers and states: plain grid sums by default,
  // or cell-weighted by h² (quadrature of the L² pairings). The fields agree;
  // data and Grams differ by the factor h².
  bool cell_weighted_pairing = false;
  // velocity parameters on a (param_nx × param_nz) node grid over the
  // physical domain, bilinearly interpolated and extended constantly into the PML
  int param_nx = 26;
  int param_nz = 9;
  double velocity_min = 1.4;
  double velocity_max = 5.0;
};

using VelocityField = std::function<double(double x, double z)>;

// Layered, faulted profile with a fast lens; 1.5 at the surface rising to ~3.6.
double layered_velocity(double x, double z);
// 1.5 at the surface increasing linearly to `bottom` at z = depth.
VelocityField linear_velocity(double depth, double bottom = 3.6);

class Seismic2D : public DiscreteForwardModel
{
public:
  explicit Seismic2D(Seismic2DOptions options);

  Index num_sources() const override { return static_cast<Index>(source_x_.size()); }
  Index num_params() const override { return static_cast<Index>(options_.param_nx) * options_.param_nz; }
  ParamBounds bounds() const override;
  galerkin::DiscreteSystem assemble(const RealVector &theta) const override;
  std::vector<SystemDerivative> derivatives(const RealVector &theta) const override;

  // Parameter vector sampling a velocity function at the parameter nodes,
  // row-major in z: index j·param_nx + i.
  RealVector sample(const VelocityField &velocity) const;
  // The velocity at every grid unknown for the given parameters.
  RealVector nodal_velocity(const RealVector &theta) const;
  // Data for a velocity given directly on the grid unknowns (no parameter map).
  ComplexMatrix data_for_velocity(const VelocityField &velocity) const;
  // Forward fields u_j at the unknowns, for diagnostics.
  ComplexMatrix fields(const RealVector &theta) const;

  Index num_unknowns() const { return static_cast<Index>(node_x_.size()); }
  const std::vector<double> &node_x() const { return node_x_; }
  const std::vector<double> &node_z() const { return node_z_; }
  const std::vector<double> &source_x() const { return source_x_; }
  const Seismic2DOptions &options() const { return options_; }

private:
  galerkin::DiscreteSystem assemble_nodal(const RealVector &velocity) const;
  double omega() const;

  Seismic2DOptions options_;
  int ix_min_, ix_max_, iz_min_, iz_max_;  // unknown index ranges (inclusive)
  std::vector<double> node_x_, node_z_;
  std::vector<Complex> node_stretch_;  // s_x s_z at each unknown
  double weight_;                     // h² when cell-weighted, else 1
  SparseComplex laplacian_;           // weight_/h² times the stretched −∇² stencil sum
  SparseReal interpolation_;          // unknowns × parameters
  ComplexMatrix F_;
  std::vector<double> source_x_;
};

// CSV-ready velocity grid of the parameters: row-major, dx/dy the parameter spacing.
CoefficientGrid velocity_grid(const Seismic2D &model, const RealVector &theta);

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_SEISMIC2D_HPP
