// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdeinv/quadrature.hpp"

namespace pdeinv::fem
{

namespace
{

using Triplet = Eigen::Triplet<double>;

double checked(double w, const Point &x, const AssemblyCheck &check)
{
  if (!std::isfinite(w))
  {
    std::ostringstream msg;
    msg << "non-finite coefficient at (" << x.x() << ", " << x.y() << ")";
    throw Error(ErrorKind::QuadratureFailure, msg.str());
  }
  if (check.min_weight && w < *check.min_weight)
  {
    std::ostringstream msg;
    msg << "coefficient " << w << " below " << *check.min_weight << " at (" << x.x() << ", "
        << x.y() << ")";
    throw Error(ErrorKind::CoefficientNotPositive, msg.str());
  }
  return w;
}

SparseReal finish(int n, std::vector<Triplet> &triplets)
{
  SparseReal out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  for (Index k = 0; k < out.nonZeros(); ++k)
  {
    if (!std::isfinite(out.valuePtr()[k]))
    {
      throw Error(ErrorKind::QuadratureFailure, "non-finite entry in assembled matrix");
    }
  }
  return out;
}

template <typename Local>
SparseReal assemble_1d(const Mesh1D &mesh, const DofMap &dofs, Local local)
{
  std::vector<Triplet> triplets;
  triplets.reserve(4 * mesh.cells);
  for (int c = 0; c < mesh.cells; ++c)
  {
    const std::array<int, 2> nodes = {c, c + 1};
    const auto block = local(c);
    for (int a = 0; a < 2; ++a)
    {
      const int ia = dofs.dof(nodes[a]);
      if (ia < 0)
      {
        continue;
      }
      for (int b = 0; b < 2; ++b)
      {
        const int ib = dofs.dof(nodes[b]);
        if (ib >= 0)
        {
          triplets.emplace_back(ia, ib, block[a][b]);
        }
      }
    }
  }
  return finish(dofs.num_dofs(), triplets);
}

struct TriangleGeometry
{
  double area;
  std::array<Eigen::Vector2d, 3> grad;  // gradients of the barycentric coordinates
};

TriangleGeometry geometry(const TriMesh &mesh, const std::array<int, 3> &t)
{
  const Point &p0 = mesh.nodes[t[0]];
  const Point &p1 = mesh.nodes[t[1]];
  const Point &p2 = mesh.nodes[t[2]];
  const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  TriangleGeometry g;
  g.area = 0.5 * std::abs(det);
  g.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
  g.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
  g.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
  return g;
}

template <typename Local>
SparseReal assemble_2d(const TriMesh &mesh, const DofMap &dofs, Local local)
{
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.triangles.size());
  for (const auto &t : mesh.triangles)
  {
    const auto block = local(t, geometry(mesh, t));
    for (int a = 0; a < 3; ++a)
    {
      const int ia = dofs.dof(t[a]);
      if (ia < 0)
      {
        continue;
      }
      for (int b = 0; b < 3; ++b)
      {
        const int ib = dofs.dof(t[b]);
        if (ib >= 0)
        {
          triplets.emplace_back(ia, ib, block[a][b]);
        }
      }
    }
  }
  return finish(dofs.num_dofs(), triplets);
}

}  // namespace

Mesh1D::Mesh1D(int cells_) : cells(cells_), h(1.0 / cells_)
{
  if (cells_ < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "1D mesh needs at least one cell");
  }
}

TriMesh::TriMesh(int nx_, int ny_) : nx(nx_), ny(ny_)
{
  if (nx < 1 || ny < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "triangle mesh needs at least one cell per direction");
  }
  nodes.reserve((nx + 1) * (ny + 1));
  on_boundary.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
  {
    for (int i = 0; i <= nx; ++i)
    {
      nodes.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
      on_boundary.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  }
  triangles.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const int n00 = node_index(i, j), n10 = node_index(i + 1, j);
      const int n01 = node_index(i, j + 1), n11 = node_index(i + 1, j + 1);
      triangles.push_back({n00, n10, n11});
      triangles.push_back({n00, n11, n01});
    }
  }
}

DofMap::DofMap(const std::vector<bool> &constrained) : node_to_dof_(constrained.size(), -1)
{
  for (std::size_t i = 0; i < constrained.size(); ++i)
  {
    if (!constrained[i])
    {
      node_to_dof_[i] = num_dofs_++;
      dof_to_node_.push_back(static_cast<int>(i));
    }
  }
}

RealVector DofMap::expand(const RealVector &dof_values) const
{
  RealVector out = RealVector::Zero(num_nodes());
  for (int d = 0; d < num_dofs_; ++d)
  {
    out(dof_to_node_[d]) = dof_values(d);
  }
  return out;
}

ComplexVector DofMap::expand(const ComplexVector &dof_values) const
{
  ComplexVector out = ComplexVector::Zero(num_nodes());
  for (int d = 0; d < num_dofs_; ++d)
  {
    out(dof_to_node_[d]) = dof_values(d);
  }
  return out;
}

DofMap dirichlet_ends(const Mesh1D &mesh, bool left, bool right)
{
  std::vector<bool> constrained(mesh.num_nodes(), false);
  constrained.front() = left;
  constrained.back() = right;
  return DofMap(constrained);
}

DofMap dirichlet_boundary(const TriMesh &mesh)
{
  return DofMap(mesh.on_boundary);
}

SparseReal stiffness(const Mesh1D &mesh, const DofMap &dofs, const ScalarField &weight,
                     const AssemblyCheck &check)
{
  const auto &rule = quadrature::cell_rule_1d();
  return assemble_1d(mesh, dofs, [&](int c) {
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
    {
      const Point x((c + 0.5 * (rule.points[q] + 1.0)) * mesh.h, 0.0);
      integral += 0.5 * mesh.h * rule.weights[q] * checked(weight(x), x, check);
    }
    const double k = integral / (mesh.h * mesh.h);
    return std::array<std::array<double, 2>, 2>{{{k, -k}, {-k, k}}};
  });
}

SparseReal mass(const Mesh1D &mesh, const DofMap &dofs, const ScalarField &weight,
                const AssemblyCheck &check)
{
  const auto &rule = quadrature::cell_rule_1d();
  return assemble_1d(mesh, dofs, [&](int c) {
    std::array<std::array<double, 2>, 2> block{};
    for (std::size_t q = 0; q < rule.points.size(); ++q)
    {
      const double s = 0.5 * (rule.points[q] + 1.0);
      const Point x((c + s) * mesh.h, 0.0);
      const double w = 0.5 * mesh.h * rule.weights[q] * checked(weight(x), x, check);
      const std::array<double, 2> phi = {1.0 - s, s};
      for (int a = 0; a < 2; ++a)
      {
        for (int b = 0; b < 2; ++b)
        {
          block[a][b] += w * phi[a] * phi[b];
        }
      }
    }
    return block;
  });
}

RealVector point_load(const Mesh1D &mesh, const DofMap &dofs, double x)
{
  if (!(x >= 0.0 && x <= 1.0))
  {
    throw Error(ErrorKind::InvalidArgument, "point source outside [0, 1]");
  }
  RealVector out = RealVector::Zero(dofs.num_dofs());
  const int c = std::min(static_cast<int>(x / mesh.h), mesh.cells - 1);
  const double s = x / mesh.h - c;
  const std::array<double, 2> phi = {1.0 - s, s};
  for (int a = 0; a < 2; ++a)
  {
    const int d = dofs.dof(c + a);
    if (d >= 0)
    {
      out(d) += phi[a];
    }
  }
  return out;
}

SparseReal stiffness(const TriMesh &mesh, const DofMap &dofs, const ScalarField &weight,
                     const AssemblyCheck &check)
{
  const auto &rule = quadrature::triangle_rule_degree4();
  return assemble_2d(mesh, dofs, [&](const std::array<int, 3> &t, const TriangleGeometry &g) {
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q)
    {
      const auto &l = rule.barycentric[q];
      const Point x = l[0] * mesh.nodes[t[0]] + l[1] * mesh.nodes[t[1]] + l[2] * mesh.nodes[t[2]];
      integral += rule.weights[q] * checked(weight(x), x, check);
    }
    integral *= g.area;
    std::array<std::array<double, 3>, 3> block{};
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        block[a][b] = integral * g.grad[a].dot(g.grad[b]);
      }
    }
    return block;
  });
}

SparseReal mass(const TriMesh &mesh, const DofMap &dofs, const ScalarField &weight,
                const AssemblyCheck &check)
{
  const auto &rule = quadrature::triangle_rule_degree4();
  return assemble_2d(mesh, dofs, [&](const std::array<int, 3> &t, const TriangleGeometry &g) {
    std::array<std::array<double, 3>, 3> block{};
    for (std::size_t q = 0; q < rule.weights.size(); ++q)
    {
      const auto &l = rule.barycentric[q];
      const Point x = l[0] * mesh.nodes[t[0]] + l[1] * mesh.nodes[t[1]] + l[2] * mesh.nodes[t[2]];
      const double w = g.area * rule.weights[q] * checked(weight(x), x, check);
      for (int a = 0; a < 3; ++a)
      {
        for (int b = 0; b < 3; ++b)
        {
          block[a][b] += w * l[a] * l[b];
        }
      }
    }
    return block;
  });
}

RealVector load(const TriMesh &mesh, const DofMap &dofs, const ScalarField &source)
{
  const auto &rule = quadrature::triangle_rule_degree4();
  RealVector out = RealVector::Zero(dofs.num_dofs());
  for (const auto &t : mesh.triangles)
  {
    const double area = geometry(mesh, t).area;
    for (std::size_t q = 0; q < rule.weights.size(); ++q)
    {
      const auto &l = rule.barycentric[q];
      const Point x = l[0] * mesh.nodes[t[0]] + l[1] * mesh.nodes[t[1]] + l[2] * mesh.nodes[t[2]];
      const double f = area * rule.weights[q] * source(x);
      for (int a = 0; a < 3; ++a)
      {
        const int d = dofs.dof(t[a]);
        if (d >= 0)
        {
          out(d) += f * l[a];
        }
      }
    }
  }
  return out;
}

double interpolate(const TriMesh &mesh, const RealVector &nodal, const Point &x)
{
  const double fx = std::clamp(x.x(), 0.0, 1.0) * mesh.nx;
  const double fy = std::clamp(x.y(), 0.0, 1.0) * mesh.ny;
  const int i = std::min(static_cast<int>(fx), mesh.nx - 1);
  const int j = std::min(static_cast<int>(fy), mesh.ny - 1);
  const double s = fx - i, t = fy - j;
  const double v00 = nodal(mesh.node_index(i, j)), v10 = nodal(mesh.node_index(i + 1, j));
  const double v01 = nodal(mesh.node_index(i, j + 1)), v11 = nodal(mesh.node_index(i + 1, j + 1));
  // Lower triangle (n00, n10, n11) when s ≥ t, upper (n00, n11, n01) otherwise.
  if (s >= t)
  {
    return v00 + s * (v10 - v00) + t * (v11 - v10);
  }
  return v00 + t * (v01 - v00) + s * (v11 - v01);
}

}  // namespace pdeinv::fem
