// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/common.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

namespace pdeinv::models
{

ModelKind parse_model_kind(const std::string &text)
{
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "elliptic1d")
  {
    return ModelKind::Elliptic1D;
  }
  if (t == "poisson2d")
  {
    return ModelKind::Poisson2D;
  }
  if (t == "helmholtz1d")
  {
    return ModelKind::Helmholtz1D;
  }
  if (t == "schrodinger2d")
  {
    return ModelKind::Schrodinger2D;
  }
  if (t == "seismic2d")
  {
    return ModelKind::Seismic2D;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + text + "'");
}

std::string to_string(ModelKind kind)
{
  switch (kind)
  {
    case ModelKind::Elliptic1D: return "elliptic1d";
    case ModelKind::Poisson2D: return "poisson2d";
    case ModelKind::Helmholtz1D: return "helmholtz1d";
    case ModelKind::Schrodinger2D: return "schrodinger2d";
    case ModelKind::Seismic2D: return "seismic2d";
  }
  return "unknown";
}

void add_noise(MeasurementSet &set, double level, std::uint64_t seed, bool real_only)
{
  if (level < 0.0)
  {
    throw Error(ErrorKind::InvalidArgument, "noise level must be non-negative");
  }
  if (level == 0.0)
  {
    return;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto &D : set.data)
  {
    const double sigma = level * D.norm() / static_cast<double>(std::max<Index>(D.rows(), 1));
    for (Index j = 0; j < D.cols(); ++j)
    {
      for (Index i = 0; i < D.rows(); ++i)
      {
        const double re = normal(rng);
        const double im = real_only ? 0.0 : normal(rng);
        D(i, j) += sigma * Complex(re, im);
      }
    }
  }
}

std::vector<fem::Point> ring_centers(int n, double margin, double phase)
{
  if (n < 1 || !(margin >= 0.0 && margin < 0.5))
  {
    throw Error(ErrorKind::InvalidArgument, "ring layout needs n ≥ 1 and 0 ≤ margin < 0.5");
  }
  const double side = 1.0 - 2.0 * margin;
  const double perimeter = 4.0 * side;
  std::vector<fem::Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    double s = perimeter * (i + phase) / n;
    fem::Point p;
    if (s < side)
    {
      p = {margin + s, margin};
    }
    else if ((s -= side) < side)
    {
      p = {1.0 - margin, margin + s};
    }
    else if ((s -= side) < side)
    {
      p = {1.0 - margin - s, 1.0 - margin};
    }
    else
    {
      s -= side;
      p = {margin, 1.0 - margin - s};
    }
    out.push_back(p);
  }
  return out;
}

ComplexMatrix gaussian_loads(const fem::TriMesh &mesh, const fem::DofMap &dofs,
                             const std::vector<fem::Point> &centers, double a)
{
  if (!(a > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "Gaussian source parameter must be positive");
  }
  ComplexMatrix F(dofs.num_dofs(), static_cast<Index>(centers.size()));
  for (std::size_t i = 0; i < centers.size(); ++i)
  {
    const fem::Point c = centers[i];
    F.col(static_cast<Index>(i)) =
      fem::load(mesh, dofs, [&](const fem::Point &x) { return std::exp(-a * (x - c).squaredNorm()); })
        .cast<Complex>();
  }
  return F;
}

std::vector<double> uniform_interior_points(int n)
{
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    x[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / (n + 1);
  }
  return x;
}

double CosineFamily::mode(int k, double x)
{
  return k == 0 ? 1.0 : std::cos(k * std::numbers::pi * x);
}

double CosineFamily::value(const RealVector &theta, double x)
{
  double c = 0.0;
  for (Index k = 0; k < theta.size(); ++k)
  {
    c += theta(k) * mode(static_cast<int>(k), x);
  }
  return c;
}

}  // namespace pdeinv::models
