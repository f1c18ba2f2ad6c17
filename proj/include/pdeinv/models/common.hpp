// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_MODELS_COMMON_HPP
#define PDEINV_MODELS_COMMON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pdeinv/fem.hpp"
#include "pdeinv/forward_model.hpp"

namespace pdeinv::models
{

enum class ModelKind
{
  Elliptic1D,
  Poisson2D,
  Helmholtz1D,
  Schrodinger2D,
  Seismic2D,
};

ModelKind parse_model_kind(const std::string &text);
std::string to_string(ModelKind kind);

// Data matrices D, one per spectral value (k or λ). Helmholtz models also
// record the boundary traces b_i = u_i(1).
struct MeasurementSet
{
  std::vector<double> spectral_grid;
  std::vector<ComplexMatrix> data;
  std::vector<ComplexVector> boundary_traces;
};

// Adds complex (or, with `real_only`, real) Gaussian noise with standard
// deviation level·‖D‖_F/n to every entry of every matrix.
void add_noise(MeasurementSet &set, double level, std::uint64_t seed, bool real_only);

// n points equispaced along the boundary of the square [m, 1 − m]², running
// counter-clockwise from (m, m) shifted by `phase` spacings along the bottom edge.
std::vector<fem::Point> ring_centers(int n, double margin, double phase = 0.0);

// Load vectors of the Gaussian sources exp(−a|x − x_i|²), one column each.
ComplexMatrix gaussian_loads(const fem::TriMesh &mesh, const fem::DofMap &dofs,
                             const std::vector<fem::Point> &centers, double a);

// Default 1D receiver layout x_i = i/(n + 1).
std::vector<double> uniform_interior_points(int n);

// c(x; θ) = Σ_k θ_k cos(kπx) on [0, 1]; θ_0 is the mean level.
struct CosineFamily
{
  static double mode(int k, double x);
  static double value(const RealVector &theta, double x);
};

// Samples a 2D field on an (nx × ny) node grid covering [0, width] × [0, height].
struct CoefficientGrid
{
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  RealVector values;  // row-major: index j·nx + i for x = i·dx, y = j·dy
};

}  // namespace pdeinv::models

#endif  // PDEINV_MODELS_COMMON_HPP
