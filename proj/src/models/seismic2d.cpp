// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/seismic2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pdeinv::models
{

namespace
{

// Depth of interface l below the surface at offset x; a fault at x = 3.1
// drops every interface under the first by 0.12.
double interface_depth(int l, double x)
{
  static constexpr double base[] = {0.15, 0.33, 0.52, 0.70, 0.86, 1.04, 1.24};
  static constexpr double tilt[] = {0.0, 0.02, 0.05, 0.08, 0.10, 0.06, 0.03};
  double z = base[l] + tilt[l] * (x - 2.5) + 0.03 * std::sin(2.0 * std::numbers::pi * x / 2.5 + l);
  if (l > 0 && x > 3.1)
  {
    z += 0.12;
  }
  return z;
}

}  // namespace

double layered_velocity(double x, double z)
{
  static constexpr double layer_speed[] = {1.5, 1.75, 1.95, 2.25, 2.05, 2.7, 3.1, 3.6};
  // fast lens
  const double ex = (x - 1.4) / 0.45, ez = (z - 0.95) / 0.12;
  if (ex * ex + ez * ez < 1.0)
  {
    return 3.3;
  }
  int layer = 0;
  while (layer < 7 && z > interface_depth(layer, x))
  {
    ++layer;
  }
  return layer_speed[layer];
}

VelocityField linear_velocity(double depth, double bottom)
{
  return [depth, bottom](double, double z) { return 1.5 + (bottom - 1.5) * std::clamp(z / depth, 0.0, 1.0); };
}

Seismic2D::Seismic2D(Seismic2DOptions options) : options_(std::move(options))
{
  const auto &o = options_;
  if (!(o.spacing > 0.0) || o.pml_cells < 1 || o.num_sources < 1 || o.param_nx < 2 || o.param_nz < 2 ||
      !(o.frequency > 0.0) || !(o.source_sigma > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "invalid seismic options");
  }
  const double h = o.spacing;
  weight_ = o.cell_weighted_pairing ? h * h : 1.0;
  const int nx = static_cast<int>(std::lround(o.width / h));
  const int nz = static_cast<int>(std::lround(o.depth / h));
  if (std::abs(nx * h - o.width) > 1e-9 * o.width || std::abs(nz * h - o.depth) > 1e-9 * o.depth)
  {
    throw Error(ErrorKind::InvalidArgument, "grid spacing must divide the domain size");
  }
  const int P = o.pml_cells;
  ix_min_ = -P + 1;
  ix_max_ = nx + P - 1;
  iz_min_ = o.absorbing_top ? -P + 1 : 1;
  iz_max_ = nz + P - 1;

  const double w = omega();
  const double L = P * h;
  const double sigma_max = 3.0 * o.pml_velocity * std::log(1.0 / o.pml_reflection) / (2.0 * L);
  auto stretch = [&](double d)
  {
    const double r = std::max(d, 0.0) / L;
    return Complex(1.0, sigma_max * r * r / w);
  };
  auto sx = [&](double x) { return stretch(std::max(-x, x - o.width)); };
  auto sz = [&](double z) { return stretch(o.absorbing_top ? std::max(-z, z - o.depth) : z - o.depth); };

  const int cols = ix_max_ - ix_min_ + 1;
  auto index = [&](int i, int j) { return static_cast<Index>(j - iz_min_) * cols + (i - ix_min_); };
  const Index N = static_cast<Index>(cols) * (iz_max_ - iz_min_ + 1);
  node_x_.resize(static_cast<std::size_t>(N));
  node_z_.resize(static_cast<std::size_t>(N));
  node_stretch_.resize(static_cast<std::size_t>(N));

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(5 * N));
  for (int j = iz_min_; j <= iz_max_; ++j)
  {
    for (int i = ix_min_; i <= ix_max_; ++i)
    {
      const Index p = index(i, j);
      const double x = i * h, z = j * h;
      node_x_[static_cast<std::size_t>(p)] = x;
      node_z_[static_cast<std::size_t>(p)] = z;
      node_stretch_[static_cast<std::size_t>(p)] = sx(x) * sz(z);
      Complex diag = 0.0;
      auto face = [&](int qi, int qj, Complex a)
      {
        diag += a;
        if (qi >= ix_min_ && qi <= ix_max_ && qj >= iz_min_ && qj <= iz_max_)
        {
          trip.emplace_back(p, index(qi, qj), -a);
        }
      };
      face(i - 1, j, sz(z) / sx(x - 0.5 * h));
      face(i + 1, j, sz(z) / sx(x + 0.5 * h));
      face(i, j - 1, sx(x) / sz(z - 0.5 * h));
      face(i, j + 1, sx(x) / sz(z + 0.5 * h));
      trip.emplace_back(p, p, diag);
    }
  }
  laplacian_.resize(N, N);
  laplacian_.setFromTriplets(trip.begin(), trip.end());
  laplacian_ *= Complex(weight_ / (h * h));

  // bilinear map from the parameter grid, clamped to the physical domain
  const double px = o.width / (o.param_nx - 1), pz = o.depth / (o.param_nz - 1);
  std::vector<Eigen::Triplet<double>> itrip;
  for (Index p = 0; p < N; ++p)
  {
    const double x = std::clamp(node_x_[static_cast<std::size_t>(p)], 0.0, o.width) / px;
    const double z = std::clamp(node_z_[static_cast<std::size_t>(p)], 0.0, o.depth) / pz;
    const int ci = std::min(static_cast<int>(x), o.param_nx - 2);
    const int cj = std::min(static_cast<int>(z), o.param_nz - 2);
    const double fx = x - ci, fz = z - cj;
    const double wts[4] = {(1 - fx) * (1 - fz), fx * (1 - fz), (1 - fx) * fz, fx * fz};
    const int ids[4] = {cj * o.param_nx + ci, cj * o.param_nx + ci + 1, (cj + 1) * o.param_nx + ci,
                        (cj + 1) * o.param_nx + ci + 1};
    for (int q = 0; q < 4; ++q)
    {
      if (wts[q] != 0.0)
      {
        itrip.emplace_back(p, ids[q], wts[q]);
      }
    }
  }
  interpolation_.resize(N, static_cast<Index>(o.param_nx) * o.param_nz);
  interpolation_.setFromTriplets(itrip.begin(), itrip.end());

  // sources: unit-mass Gaussians on the acquisition line
  const double s2 = o.source_sigma * o.source_sigma;
  F_ = ComplexMatrix::Zero(N, o.num_sources);
  for (int s = 0; s < o.num_sources; ++s)
  {
    const double xs = o.num_sources == 1
                        ? 0.5 * (o.source_x_min + o.source_x_max)
                        : o.source_x_min + (o.source_x_max - o.source_x_min) * s / (o.num_sources - 1);
    source_x_.push_back(xs);
    for (Index p = 0; p < N; ++p)
    {
      const double dx = node_x_[static_cast<std::size_t>(p)] - xs, dz = node_z_[static_cast<std::size_t>(p)] - o.source_depth;
      const double r2 = dx * dx + dz * dz;
      if (r2 < 49.0 * s2)
      {
        F_(p, s) = weight_ * std::exp(-0.5 * r2 / s2) / (2.0 * std::numbers::pi * s2);
      }
    }
  }
}

double Seismic2D::omega() const
{
  return 2.0 * std::numbers::pi * options_.frequency;
}

ParamBounds Seismic2D::bounds() const
{
  return {RealVector::Constant(num_params(), options_.velocity_min),
          RealVector::Constant(num_params(), options_.velocity_max)};
}

RealVector Seismic2D::nodal_velocity(const RealVector &theta) const
{
  if (theta.size() != num_params())
  {
    throw Error(ErrorKind::DimensionMismatch, "velocity parameter vector has the wrong length");
  }
  return interpolation_ * theta;
}

galerkin::DiscreteSystem Seismic2D::assemble_nodal(const RealVector &velocity) const
{
  if (velocity.minCoeff() <= 0.0)
  {
    throw Error(ErrorKind::CoefficientNotPositive, "velocity must be positive");
  }
  const double w = omega();
  galerkin::DiscreteSystem sys;
  sys.K = laplacian_;
  for (Index p = 0; p < sys.K.rows(); ++p)
  {
    const double c = velocity(p);
    sys.K.coeffRef(p, p) -= weight_ * w * w * node_stretch_[static_cast<std::size_t>(p)] / (c * c);
  }
  sys.F = F_;
  sys.R.resize(sys.K.rows(), sys.K.cols());
  sys.R.setIdentity();
  sys.R *= Complex(weight_);
  return sys;
}

galerkin::DiscreteSystem Seismic2D::assemble(const RealVector &theta) const
{
  return assemble_nodal(nodal_velocity(theta));
}

std::vector<SystemDerivative> Seismic2D::derivatives(const RealVector &theta) const
{
  const RealVector c = nodal_velocity(theta);
  const double w = omega();
  std::vector<SystemDerivative> out(static_cast<std::size_t>(num_params()));
  for (Index k = 0; k < interpolation_.outerSize(); ++k)
  {
    for (SparseReal::InnerIterator it(interpolation_, k); it; ++it)
    {
      const Index p = it.row();
      const double cp = c(p);
      out[static_cast<std::size_t>(k)].dK.emplace_back(
        p, p, 2.0 * weight_ * w * w * node_stretch_[static_cast<std::size_t>(p)] * it.value() / (cp * cp * cp));
    }
  }
  return out;
}

RealVector Seismic2D::sample(const VelocityField &velocity) const
{
  const auto &o = options_;
  RealVector theta(num_params());
  for (int j = 0; j < o.param_nz; ++j)
  {
    for (int i = 0; i < o.param_nx; ++i)
    {
      theta(j * o.param_nx + i) = velocity(o.width * i / (o.param_nx - 1), o.depth * j / (o.param_nz - 1));
    }
  }
  return theta;
}

ComplexMatrix Seismic2D::data_for_velocity(const VelocityField &velocity) const
{
  RealVector c(num_unknowns());
  for (Index p = 0; p < c.size(); ++p)
  {
    c(p) = velocity(std::clamp(node_x_[static_cast<std::size_t>(p)], 0.0, options_.width),
                    std::clamp(node_z_[static_cast<std::size_t>(p)], 0.0, options_.depth));
  }
  return galerkin::DiscreteSolution(assemble_nodal(c)).predicted_data();
}

ComplexMatrix Seismic2D::fields(const RealVector &theta) const
{
  return galerkin::DiscreteSolution(assemble(theta)).states();
}

CoefficientGrid velocity_grid(const Seismic2D &model, const RealVector &theta)
{
  const auto &o = model.options();
  CoefficientGrid g;
  g.nx = o.param_nx;
  g.ny = o.param_nz;
  g.dx = o.width / (o.param_nx - 1);
  g.dy = o.depth / (o.param_nz - 1);
  g.values = theta;
  return g;
}

}  // namespace pdeinv::models
