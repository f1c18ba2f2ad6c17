// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_FEM_HPP
#define PDEINV_FEM_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "pdeinv/types.hpp"

namespace pdeinv::fem
{

using Point = Eigen::Vector2d;
using ScalarField = std::function<double(const Point &)>;

// Uniform partition of [0, 1].
struct Mesh1D
{
  explicit Mesh1D(int cells);

  int cells;
  double h;
  int num_nodes() const { return cells + 1; }
  double node(int i) const { return i * h; }
};

// Structured triangulation of [0,1]²: every square cell is split along its
// diagonal into two triangles. Node (i, j) has index j·(nx+1) + i.
struct TriMesh
{
  TriMesh(int nx, int ny);

  int nx, ny;
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> on_boundary;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
};

// Maps mesh nodes to unknowns after removing Dirichlet-constrained nodes.
class DofMap
{
public:
  explicit DofMap(const std::vector<bool> &constrained);

  int num_dofs() const { return num_dofs_; }
  int num_nodes() const { return static_cast<int>(node_to_dof_.size()); }
  int dof(int node) const { return node_to_dof_[node]; }  // −1 when constrained
  const std::vector<int> &dof_to_node() const { return dof_to_node_; }

  // Expands a DOF vector to all nodes, writing zero on constrained nodes.
  RealVector expand(const RealVector &dof_values) const;
  ComplexVector expand(const ComplexVector &dof_values) const;

private:
  std::vector<int> node_to_dof_;
  std::vector<int> dof_to_node_;
  int num_dofs_ = 0;
};

DofMap dirichlet_ends(const Mesh1D &mesh, bool left, bool right);
DofMap dirichlet_boundary(const TriMesh &mesh);

struct AssemblyCheck
{
  // Weight values below this bound at any quadrature point raise
  // CoefficientNotPositive.
  std::optional<double> min_weight;
};

// ∫ w φ_a′ φ_b′ and ∫ w φ_a φ_b on the DOF space (8-point Gauss per cell).
SparseReal stiffness(const Mesh1D &mesh, const DofMap &dofs, const ScalarField &weight,
                     const AssemblyCheck &check = {});
SparseReal mass(const Mesh1D &mesh, const DofMap &dofs, const ScalarField &weight,
                const AssemblyCheck &check = {});
// Hat-function values at x, i.e. the load of a point source δ(· − x).
RealVector point_load(const Mesh1D &mesh, const DofMap &dofs, double x);

// ∫ w ∇φ_a·∇φ_b, ∫ w φ_a φ_b and ∫ f φ_a on the DOF space (degree-4 rule).
SparseReal stiffness(const TriMesh &mesh, const DofMap &dofs, const ScalarField &weight,
                     const AssemblyCheck &check = {});
SparseReal mass(const TriMesh &mesh, const DofMap &dofs, const ScalarField &weight,
                const AssemblyCheck &check = {});
RealVector load(const TriMesh &mesh, const DofMap &dofs, const ScalarField &source);

// Interpolates a nodal P1 field (all nodes) at an arbitrary point of [0,1]².
double interpolate(const TriMesh &mesh, const RealVector &nodal, const Point &x);

}  // namespace pdeinv::fem

#endif  // PDEINV_FEM_HPP
