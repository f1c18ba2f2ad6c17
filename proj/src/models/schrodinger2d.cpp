// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/schrodinger2d.hpp"

#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

namespace pdeinv::models
{

namespace
{

ParamBounds make_bounds(const Schrodinger2DOptions &o)
{
  return {RealVector::Constant(o.num_modes, o.coeff_min), RealVector::Constant(o.num_modes, o.coeff_max)};
}

void require_length(const RealVector &theta, int n)
{
  if (theta.size() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "coefficient vector has the wrong length");
  }
}

RealMatrix symmetric(const RealMatrix &X)
{
  return 0.5 * (X + X.transpose());
}

}  // namespace

double schrodinger_mode(int k, const fem::Point &x)
{
  const double s1 = std::sin(k * x.x()), s2 = std::sin(k * x.y());
  return s1 * s1 + s2 * s2;
}

RealVector schrodinger_random_coefficients(const Schrodinger2DOptions &options, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(options.coeff_min, options.coeff_max);
  RealVector c(options.num_modes);
  for (Index k = 0; k < c.size(); ++k)
  {
    c(k) = uniform(rng);
  }
  return c;
}

Schrodinger2DSpace::Schrodinger2DSpace(const Schrodinger2DOptions &o)
  : mesh(o.mesh, o.mesh), dofs(fem::dirichlet_boundary(mesh))
{
  if (o.num_modes < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "schrodinger2d needs at least one mode");
  }
  const auto one = [](const fem::Point &) { return 1.0; };
  L = fem::stiffness(mesh, dofs, one);
  mass = fem::mass(mesh, dofs, one);
  for (int k = 1; k <= o.num_modes; ++k)
  {
    modes.push_back(fem::mass(mesh, dofs, [k](const fem::Point &x) { return schrodinger_mode(k, x); }));
  }
  F = gaussian_loads(mesh, dofs, ring_centers(o.num_sources, o.ring_margin, o.ring_phase), o.source_width);
}

Schrodinger2DFem::Schrodinger2DFem(Schrodinger2DOptions options)
  : Schrodinger2DFem(options, std::make_shared<const Schrodinger2DSpace>(options))
{
}

Schrodinger2DFem::Schrodinger2DFem(Schrodinger2DOptions options,
                                   std::shared_ptr<const Schrodinger2DSpace> space)
  : options_(std::move(options)), space_(std::move(space))
{
}

Schrodinger2DFem Schrodinger2DFem::at_lambda(double lambda) const
{
  Schrodinger2DOptions o = options_;
  o.lambda = lambda;
  return Schrodinger2DFem(o, space_);
}

ParamBounds Schrodinger2DFem::bounds() const
{
  return make_bounds(options_);
}

galerkin::DiscreteSystem Schrodinger2DFem::assemble(const RealVector &theta) const
{
  require_length(theta, options_.num_modes);
  SparseReal potential = space_->L;
  for (int k = 0; k < options_.num_modes; ++k)
  {
    potential += theta(k) * space_->modes[static_cast<std::size_t>(k)];
  }
  galerkin::DiscreteSystem sys;
  sys.K = galerkin::to_complex(SparseReal(potential - options_.lambda * space_->mass));
  sys.F = space_->F;
  sys.R = galerkin::to_complex(
    options_.inner_product == galerkin::InnerProductMode::CoefficientDependent ? potential : space_->L);
  return sys;
}

std::vector<SystemDerivative> Schrodinger2DFem::derivatives(const RealVector &) const
{
  std::vector<SystemDerivative> out(static_cast<std::size_t>(options_.num_modes));
  for (std::size_t k = 0; k < out.size(); ++k)
  {
    out[k].dK = to_triplets(space_->modes[k]);
    if (options_.inner_product == galerkin::InnerProductMode::CoefficientDependent)
    {
      out[k].dR = out[k].dK;
    }
  }
  return out;
}

Schrodinger2DSpan::Schrodinger2DSpan(Schrodinger2DOptions options)
  : options_(std::move(options)), space_(options_)
{
  if (options_.inner_product != galerkin::InnerProductMode::CoefficientIndependent)
  {
    throw Error(ErrorKind::InvalidArgument,
                "the span-of-sources Schrodinger model uses the unweighted H1 inner product");
  }
  Eigen::SimplicialLDLT<SparseReal> ldlt(space_.L);
  if (ldlt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "stiffness matrix is not positive definite");
  }
  const RealMatrix F = space_.F.real();
  const RealMatrix p = ldlt.solve(F);
  M_ = symmetric(F.transpose() * p);
  S_ = symmetric(p.transpose() * (space_.mass * p));
  for (const auto &mode : space_.modes)
  {
    H_.push_back(symmetric(p.transpose() * (mode * p)));
  }
}

ParamBounds Schrodinger2DSpan::bounds() const
{
  return make_bounds(options_);
}

galerkin::AssembledSystem Schrodinger2DSpan::assemble(const RealVector &theta) const
{
  require_length(theta, options_.num_modes);
  RealMatrix A = M_ - options_.lambda * S_;
  for (int k = 0; k < options_.num_modes; ++k)
  {
    A += theta(k) * H_[static_cast<std::size_t>(k)];
  }
  galerkin::AssembledSystem sys;
  sys.M = M_.cast<Complex>();
  sys.A = A.cast<Complex>();
  sys.S = S_.cast<Complex>();
  sys.H = H_;
  sys.inner_product = options_.inner_product;
  return sys;
}

std::vector<SpanDerivative> Schrodinger2DSpan::derivatives(const RealVector &) const
{
  std::vector<SpanDerivative> out;
  for (const auto &H : H_)
  {
    out.push_back({ComplexMatrix::Zero(M_.rows(), M_.cols()), H.cast<Complex>()});
  }
  return out;
}

std::unique_ptr<ForwardModel> make_schrodinger2d(const Schrodinger2DOptions &options)
{
  if (options.basis == galerkin::BasisMode::SpanOfSources)
  {
    return std::make_unique<Schrodinger2DSpan>(options);
  }
  return std::make_unique<Schrodinger2DFem>(options);
}

}  // namespace pdeinv::models
