// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_QUADRATURE_HPP
#define PDEINV_QUADRATURE_HPP

#include <array>
#include <vector>

namespace pdeinv::quadrature
{

struct Rule1D
{
  std::vector<double> points;  // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss–Legendre rule, exact for polynomials of degree 2n − 1.
Rule1D gauss_legendre(int n);

// Cached 8-point rule used for all 1D cell integrals.
const Rule1D &cell_rule_1d();

struct TriangleRule
{
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;  // sum to 1; multiply by the triangle area
};

// Symmetric 6-point rule exact for degree 4.
const TriangleRule &triangle_rule_degree4();

}  // namespace pdeinv::quadrature

#endif  // PDEINV_QUADRATURE_HPP
