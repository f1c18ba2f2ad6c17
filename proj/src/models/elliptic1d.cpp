// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/elliptic1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdeinv/quadrature.hpp"

namespace pdeinv::models
{

namespace
{

// Running integrals Φ = ∫1/c and Ψ = ∫1/c² with their θ-derivatives,
// evaluated at the receivers and at x = 1.
struct Primitives
{
  RealVector phi, psi;  // at the receivers
  double phi1 = 0.0, psi1 = 0.0;
  RealMatrix dphi, dpsi;  // receivers × params
  RealVector dphi1, dpsi1;
};

Primitives integrate(const RealVector &theta, const std::vector<double> &x, double min_c)
{
  const int np = static_cast<int>(theta.size());
  const auto &rule = quadrature::cell_rule_1d();
  std::vector<double> breaks(x.begin(), x.end());
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  Primitives out;
  const Index n = static_cast<Index>(x.size());
  out.phi.setZero(n);
  out.psi.setZero(n);
  out.dphi.setZero(n, np);
  out.dpsi.setZero(n, np);
  double phi = 0.0, psi = 0.0;
  RealVector dphi = RealVector::Zero(np), dpsi = RealVector::Zero(np);
  auto record = [&](double at) {
    for (Index i = 0; i < n; ++i)
    {
      if (x[static_cast<std::size_t>(i)] == at)
      {
        out.phi(i) = phi;
        out.psi(i) = psi;
        out.dphi.row(i) = dphi.transpose();
        out.dpsi.row(i) = dpsi.transpose();
      }
    }
  };
  record(0.0);
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
  {
    const double a0 = breaks[b], a1 = breaks[b + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((a1 - a0) * 64.0)));
    const double len = (a1 - a0) / pieces;
    for (int s = 0; s < pieces; ++s)
    {
      const double lo = a0 + s * len;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
      {
        const double xq = lo + 0.5 * len * (rule.points[q] + 1.0);
        const double w = 0.5 * len * rule.weights[q];
        const double c = CosineFamily::value(theta, xq);
        if (!std::isfinite(c))
        {
          throw Error(ErrorKind::QuadratureFailure, "non-finite coefficient");
        }
        if (c < min_c)
        {
          std::ostringstream msg;
          msg << "coefficient " << c << " below " << min_c << " at x = " << xq;
          throw Error(ErrorKind::CoefficientNotPositive, msg.str());
        }
        phi += w / c;
        psi += w / (c * c);
        for (int k = 0; k < np; ++k)
        {
          const double m = CosineFamily::mode(k, xq);
          dphi(k) -= w * m / (c * c);
          dpsi(k) -= 2.0 * w * m / (c * c * c);
        }
      }
    }
    record(a1);
  }
  out.phi1 = phi;
  out.psi1 = psi;
  out.dphi1 = dphi;
  out.dpsi1 = dpsi;
  return out;
}

}  // namespace

ParamBounds Elliptic1DOptions::bounds() const
{
  ParamBounds b;
  if (lower.size() == num_params && upper.size() == num_params)
  {
    b.lower = lower;
    b.upper = upper;
    return b;
  }
  if (lower.size() != 0 || upper.size() != 0)
  {
    throw Error(ErrorKind::DimensionMismatch, "bounds must have one entry per parameter");
  }
  b.lower = RealVector::Constant(num_params, -0.2);
  b.upper = RealVector::Constant(num_params, 0.2);
  b.lower(0) = 0.5;
  b.upper(0) = 2.0;
  return b;
}

double elliptic1d_green(const RealVector &theta, double x, double y)
{
  const auto p = integrate(theta, {std::min(x, y), std::max(x, y)}, 0.0);
  return p.phi(0) * (p.phi1 - p.phi(1)) / p.phi1;
}

Elliptic1DAnalytic::Elliptic1DAnalytic(Elliptic1DOptions options) : options_(std::move(options))
{
  if (options_.num_params < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "elliptic1d needs at least one parameter");
  }
  for (double x : options_.sources)
  {
    if (!(x > 0.0 && x < 1.0))
    {
      throw Error(ErrorKind::InvalidArgument, "elliptic1d sources must lie in (0, 1)");
    }
  }
}

std::unique_ptr<Linearization> Elliptic1DAnalytic::linearize(const RealVector &theta,
                                                            bool with_gram) const
{
  if (theta.size() != options_.num_params)
  {
    throw Error(ErrorKind::DimensionMismatch, "parameter vector has the wrong length");
  }
  const auto &x = options_.sources;
  const Index n = num_sources();
  const int np = options_.num_params;
  const Primitives p = integrate(theta, x, options_.min_coefficient);
  const double F1 = p.phi1;

  Evaluation ev;
  ev.predicted.resize(n, n);
  std::vector<ComplexMatrix> dP(np, ComplexMatrix(n, n));
  const bool weighted = options_.inner_product == galerkin::InnerProductMode::CoefficientDependent;
  ComplexMatrix G(n, n);
  std::vector<ComplexMatrix> dG(np, ComplexMatrix(n, n));

  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      // a: the left point, b: the right point.
      const Index a = x[static_cast<std::size_t>(i)] <= x[static_cast<std::size_t>(j)] ? i : j;
      const Index b = a == i ? j : i;
      const double Fa = p.phi(a), Fb = p.phi(b);
      ev.predicted(i, j) = Fa * (F1 - Fb) / F1;
      const double dFa_c = (F1 - Fb) / F1, dFb_c = -Fa / F1, dF1_c = Fa * Fb / (F1 * F1);
      for (int k = 0; k < np; ++k)
      {
        dP[k](i, j) = dFa_c * p.dphi(a, k) + dFb_c * p.dphi(b, k) + dF1_c * p.dphi1(k);
      }
      if (weighted || !with_gram)
      {
        continue;
      }
      // ∫ u_i′ u_j′ with u′ = s/c piecewise: s = (Φ1 − Φ_m)/Φ1 left of x_m, −Φ_m/Φ1 right.
      const double Pa = p.psi(a), Pb = p.psi(b), P1 = p.psi1;
      const double N = (F1 - Fa) * (F1 - Fb) * Pa - Fa * (F1 - Fb) * (Pb - Pa) + Fa * Fb * (P1 - Pb);
      G(i, j) = N / (F1 * F1);
      const double dN_Fa = -(F1 - Fb) * Pa - (F1 - Fb) * (Pb - Pa) + Fb * (P1 - Pb);
      const double dN_Fb = -(F1 - Fa) * Pa + Fa * (Pb - Pa) + Fa * (P1 - Pb);
      const double dN_F1 = (F1 - Fb) * Pa + (F1 - Fa) * Pa - Fa * (Pb - Pa);
      const double dN_Pa = (F1 - Fa) * (F1 - Fb) + Fa * (F1 - Fb);
      const double dN_Pb = -Fa * (F1 - Fb) - Fa * Fb;
      const double dN_P1 = Fa * Fb;
      for (int k = 0; k < np; ++k)
      {
        const double dN = dN_Fa * p.dphi(a, k) + dN_Fb * p.dphi(b, k) + dN_F1 * p.dphi1(k) +
                          dN_Pa * p.dpsi(a, k) + dN_Pb * p.dpsi(b, k) + dN_P1 * p.dpsi1(k);
        dG[k](i, j) = dN / (F1 * F1) - 2.0 * N * p.dphi1(k) / (F1 * F1 * F1);
      }
    }
  }
  if (with_gram)
  {
    if (weighted)
    {
      // g_ij = ⟨u_i, u_j⟩_U = u_i(x_j) = d_ji.
      G = ev.predicted.transpose();
      for (int k = 0; k < np; ++k)
      {
        dG[k] = dP[k].transpose();
      }
    }
    ev.gram = G;
  }
  else
  {
    dG.clear();
  }
  return std::make_unique<DenseLinearization>(std::move(ev), std::move(dP), std::move(dG));
}

Elliptic1DFem::Elliptic1DFem(Elliptic1DOptions options)
  : options_(std::move(options)), mesh_(options_.cells),
    dofs_(fem::dirichlet_ends(mesh_, true, true))
{
  const Index n = num_sources();
  loads_.resize(dofs_.num_dofs(), n);
  for (Index i = 0; i < n; ++i)
  {
    loads_.col(i) = fem::point_load(mesh_, dofs_, options_.sources[static_cast<std::size_t>(i)])
                      .cast<Complex>();
  }
  for (int k = 0; k < options_.num_params; ++k)
  {
    mode_stiffness_.push_back(fem::stiffness(
      mesh_, dofs_, [k](const fem::Point &x) { return CosineFamily::mode(k, x.x()); }));
  }
  unit_stiffness_ = fem::stiffness(mesh_, dofs_, [](const fem::Point &) { return 1.0; });
}

galerkin::DiscreteSystem Elliptic1DFem::assemble(const RealVector &theta) const
{
  if (theta.size() != options_.num_params)
  {
    throw Error(ErrorKind::DimensionMismatch, "parameter vector has the wrong length");
  }
  fem::AssemblyCheck check;
  check.min_weight = options_.min_coefficient;
  const SparseReal K = fem::stiffness(
    mesh_, dofs_, [&](const fem::Point &x) { return CosineFamily::value(theta, x.x()); }, check);
  galerkin::DiscreteSystem sys;
  sys.K = galerkin::to_complex(K);
  sys.F = loads_;
  sys.R = options_.inner_product == galerkin::InnerProductMode::CoefficientDependent
            ? sys.K
            : galerkin::to_complex(unit_stiffness_);
  return sys;
}

std::vector<SystemDerivative> Elliptic1DFem::derivatives(const RealVector &) const
{
  std::vector<SystemDerivative> out(mode_stiffness_.size());
  for (std::size_t k = 0; k < out.size(); ++k)
  {
    out[k].dK = to_triplets(mode_stiffness_[k]);
    if (options_.inner_product == galerkin::InnerProductMode::CoefficientDependent)
    {
      out[k].dR = out[k].dK;
    }
  }
  return out;
}

std::unique_ptr<ForwardModel> make_elliptic1d(const Elliptic1DOptions &options)
{
  if (options.discretization == Elliptic1DOptions::Discretization::Analytic)
  {
    return std::make_unique<Elliptic1DAnalytic>(options);
  }
  return std::make_unique<Elliptic1DFem>(options);
}

}  // namespace pdeinv::models
