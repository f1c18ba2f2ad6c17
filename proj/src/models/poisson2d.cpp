// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/poisson2d.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

namespace pdeinv::models
{

namespace
{

double sq(double v)
{
  return v * v;
}

double base_coefficient(const fem::Point &x)
{
  return sq(std::sin(x.x())) + sq(std::sin(x.y())) + sq(std::sin(10.0 * x.x())) +
         sq(std::sin(10.0 * x.y()));
}

double theta_mode(const fem::Point &x)
{
  return 100.0 * sq(std::sin(10.0 * x.x()));
}

double scalar_theta(const RealVector &theta)
{
  if (theta.size() != 1)
  {
    throw Error(ErrorKind::DimensionMismatch, "poisson2d has exactly one parameter");
  }
  return theta(0);
}

ParamBounds make_bounds(const Poisson2DOptions &o)
{
  return {RealVector::Constant(1, o.theta_min), RealVector::Constant(1, o.theta_max)};
}

SparseReal coefficient_stiffness(const Poisson2DSpace &s, double theta)
{
  SparseReal K = s.K0 + theta * s.K1;
  K.makeCompressed();
  return K;
}

RealMatrix cholesky_solve(const SparseReal &K, const RealMatrix &B)
{
  Eigen::SimplicialLDLT<SparseReal> ldlt(K);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
  {
    throw Error(ErrorKind::NotPositiveDefinite, "stiffness matrix is not positive definite");
  }
  return ldlt.solve(B);
}

}  // namespace

double poisson2d_coefficient(double theta, const fem::Point &x)
{
  return base_coefficient(x) + theta * theta_mode(x);
}

Poisson2DSpace::Poisson2DSpace(const Poisson2DOptions &o)
  : mesh(o.mesh, o.mesh), dofs(fem::dirichlet_boundary(mesh))
{
  K0 = fem::stiffness(mesh, dofs, base_coefficient);
  K1 = fem::stiffness(mesh, dofs, theta_mode);
  L = fem::stiffness(mesh, dofs, [](const fem::Point &) { return 1.0; });
  F = gaussian_loads(mesh, dofs, ring_centers(o.num_sources, o.ring_margin), o.source_width);
}

Poisson2DFem::Poisson2DFem(Poisson2DOptions options)
  : options_(std::move(options)), space_(options_), dK_(to_triplets(space_.K1))
{
}

ParamBounds Poisson2DFem::bounds() const
{
  return make_bounds(options_);
}

galerkin::DiscreteSystem Poisson2DFem::assemble(const RealVector &theta) const
{
  const double t = scalar_theta(theta);
  fem::AssemblyCheck check;
  check.min_weight = std::numeric_limits<double>::min();
  const SparseReal K = fem::stiffness(
    space_.mesh, space_.dofs, [&](const fem::Point &x) { return poisson2d_coefficient(t, x); }, check);
  galerkin::DiscreteSystem sys;
  sys.K = galerkin::to_complex(K);
  sys.F = space_.F;
  sys.R = options_.inner_product == galerkin::InnerProductMode::CoefficientDependent
            ? sys.K
            : galerkin::to_complex(space_.L);
  return sys;
}

std::vector<SystemDerivative> Poisson2DFem::derivatives(const RealVector &) const
{
  SystemDerivative d;
  d.dK = dK_;
  if (options_.inner_product == galerkin::InnerProductMode::CoefficientDependent)
  {
    d.dR = dK_;
  }
  return {d};
}

Poisson2DSpan::Poisson2DSpan(Poisson2DOptions options) : options_(std::move(options)), space_(options_)
{
  if (options_.inner_product == galerkin::InnerProductMode::CoefficientIndependent)
  {
    const RealMatrix F = space_.F.real();
    const RealMatrix p = cholesky_solve(space_.L, F);
    M_fixed_ = F.transpose() * p;
    A0_ = p.transpose() * (space_.K0 * p);
    A1_ = p.transpose() * (space_.K1 * p);
    M_fixed_ = 0.5 * (M_fixed_ + M_fixed_.transpose()).eval();
    A0_ = 0.5 * (A0_ + A0_.transpose()).eval();
    A1_ = 0.5 * (A1_ + A1_.transpose()).eval();
  }
}

ParamBounds Poisson2DSpan::bounds() const
{
  return make_bounds(options_);
}

RealMatrix Poisson2DSpan::representers(double theta) const
{
  return cholesky_solve(coefficient_stiffness(space_, theta), space_.F.real());
}

galerkin::AssembledSystem Poisson2DSpan::assemble(const RealVector &theta) const
{
  const double t = scalar_theta(theta);
  galerkin::AssembledSystem sys;
  sys.inner_product = options_.inner_product;
  if (options_.inner_product == galerkin::InnerProductMode::CoefficientIndependent)
  {
    sys.M = M_fixed_.cast<Complex>();
    sys.A = (A0_ + t * A1_).cast<Complex>();
    return sys;
  }
  // With ⟨u, v⟩_U = 𝒜_c(u, v) the representers depend on c and M = A.
  const RealMatrix p = representers(t);
  RealMatrix M = space_.F.real().transpose() * p;
  M = 0.5 * (M + M.transpose()).eval();
  sys.M = M.cast<Complex>();
  sys.A = sys.M;
  return sys;
}

std::vector<SpanDerivative> Poisson2DSpan::derivatives(const RealVector &theta) const
{
  const double t = scalar_theta(theta);
  SpanDerivative d;
  if (options_.inner_product == galerkin::InnerProductMode::CoefficientIndependent)
  {
    d.dM = ComplexMatrix::Zero(A1_.rows(), A1_.cols());
    d.dA = A1_.cast<Complex>();
    return {d};
  }
  const RealMatrix p = representers(t);
  const RealMatrix dM = -(p.transpose() * (space_.K1 * p));
  d.dM = (0.5 * (dM + dM.transpose())).cast<Complex>();
  d.dA = d.dM;
  return {d};
}

std::unique_ptr<ForwardModel> make_poisson2d(const Poisson2DOptions &options)
{
  if (options.basis == galerkin::BasisMode::SpanOfSources)
  {
    return std::make_unique<Poisson2DSpan>(options);
  }
  return std::make_unique<Poisson2DFem>(options);
}

}  // namespace pdeinv::models
