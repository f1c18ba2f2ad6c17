// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/models/helmholtz1d.hpp"

#include <algorithm>
#include <cmath>

#include "pdeinv/quadrature.hpp"

namespace pdeinv::models
{

namespace
{

constexpr Complex kI(0.0, 1.0);

// u′ of the state with source at s, and its κ-derivative.
struct Slope
{
  Complex value;
  Complex d_kappa;
};

Slope slope(double x, double s, double kappa)
{
  if (x < s)
  {
    const Complex e = std::exp(kI * kappa * s);
    return {std::cos(kappa * x) * e, (-x * std::sin(kappa * x) + kI * s * std::cos(kappa * x)) * e};
  }
  const Complex e = std::exp(kI * kappa * x);
  return {kI * std::sin(kappa * s) * e, (kI * s * std::cos(kappa * s) - x * std::sin(kappa * s)) * e};
}

void check_sources(const std::vector<double> &sources)
{
  for (double x : sources)
  {
    if (!(x > 0.0 && x <= 1.0))
    {
      throw Error(ErrorKind::InvalidArgument, "helmholtz1d sources must lie in (0, 1]");
    }
  }
}

}  // namespace

ParamBounds Helmholtz1DOptions::bounds() const
{
  const int np = discretization == Discretization::Analytic ? 1 : num_params;
  ParamBounds b;
  if (lower.size() == np && upper.size() == np)
  {
    b.lower = lower;
    b.upper = upper;
    return b;
  }
  if (lower.size() != 0 || upper.size() != 0)
  {
    throw Error(ErrorKind::DimensionMismatch, "bounds must have one entry per parameter");
  }
  b.lower = RealVector::Constant(np, -0.2);
  b.upper = RealVector::Constant(np, 0.2);
  b.lower(0) = 0.5;
  b.upper(0) = 2.0;
  return b;
}

Complex helmholtz1d_analytic(double x, double x_i, double k, double c)
{
  const double kappa = k / c;
  const double lo = std::min(x, x_i), hi = std::max(x, x_i);
  return std::sin(kappa * lo) / kappa * std::exp(kI * kappa * hi);
}

Helmholtz1DAnalytic::Helmholtz1DAnalytic(Helmholtz1DOptions options) : options_(std::move(options))
{
  check_sources(options_.sources);
  if (!(options_.k > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive");
  }
}

ComplexVector Helmholtz1DAnalytic::boundary_traces(const RealVector &theta) const
{
  ComplexVector b(num_sources());
  for (Index i = 0; i < b.size(); ++i)
  {
    b(i) = helmholtz1d_analytic(1.0, options_.sources[static_cast<std::size_t>(i)], options_.k, theta(0));
  }
  return b;
}

std::unique_ptr<Linearization> Helmholtz1DAnalytic::linearize(const RealVector &theta,
                                                             bool with_gram) const
{
  if (theta.size() != 1)
  {
    throw Error(ErrorKind::DimensionMismatch, "analytic helmholtz1d has one parameter");
  }
  const double c = theta(0);
  if (!(c >= options_.min_coefficient) || !std::isfinite(c))
  {
    throw Error(ErrorKind::CoefficientNotPositive, "sound speed below the admissible floor");
  }
  const double k = options_.k;
  const double kappa = k / c;
  const double dkappa = -k / (c * c);
  const auto &x = options_.sources;
  const Index n = num_sources();

  Evaluation ev;
  ev.predicted.resize(n, n);
  ComplexMatrix dP(n, n);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      const double lo = std::min(x[i], x[j]), hi = std::max(x[i], x[j]);
      const Complex e = std::exp(kI * kappa * hi);
      const Complex g = std::sin(kappa * lo) / kappa * e;
      const Complex dg = -g / kappa + lo * std::cos(kappa * lo) / kappa * e + kI * hi * g;
      ev.predicted(i, j) = std::conj(g);
      dP(i, j) = std::conj(dg) * dkappa;
    }
  }

  std::vector<ComplexMatrix> dG;
  if (with_gram)
  {
    // g_ij = ∫ u_j′ conj(u_i′), integrated piecewise between receivers.
    std::vector<double> breaks(x.begin(), x.end());
    breaks.push_back(0.0);
    breaks.push_back(1.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const auto &rule = quadrature::cell_rule_1d();
    ComplexMatrix G = ComplexMatrix::Zero(n, n);
    ComplexMatrix dGk = ComplexMatrix::Zero(n, n);
    std::vector<Slope> s(static_cast<std::size_t>(n));
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
    {
      const double a0 = breaks[b], a1 = breaks[b + 1];
      const int pieces = std::max(1, static_cast<int>(std::ceil(kappa * (a1 - a0) / 0.5)));
      const double len = (a1 - a0) / pieces;
      for (int p = 0; p < pieces; ++p)
      {
        for (std::size_t q = 0; q < rule.points.size(); ++q)
        {
          const double xq = a0 + p * len + 0.5 * len * (rule.points[q] + 1.0);
          const double w = 0.5 * len * rule.weights[q];
          for (Index m = 0; m < n; ++m)
          {
            s[m] = slope(xq, x[m], kappa);
          }
          for (Index i = 0; i < n; ++i)
          {
            for (Index j = 0; j < n; ++j)
            {
              G(i, j) += w * s[j].value * std::conj(s[i].value);
              dGk(i, j) += w * (s[j].d_kappa * std::conj(s[i].value) +
                                s[j].value * std::conj(s[i].d_kappa));
            }
          }
        }
      }
    }
    ev.gram = 0.5 * (G + G.adjoint());
    dG.push_back(0.5 * (dGk + dGk.adjoint()) * dkappa);
  }
  return std::make_unique<DenseLinearization>(std::move(ev), std::vector<ComplexMatrix>{dP},
                                              std::move(dG));
}

Helmholtz1DFem::Helmholtz1DFem(Helmholtz1DOptions options)
  : options_(std::move(options)), mesh_(options_.cells), dofs_(fem::dirichlet_ends(mesh_, true, false))
{
  check_sources(options_.sources);
  const Index n = num_sources();
  loads_.resize(dofs_.num_dofs(), n);
  for (Index i = 0; i < n; ++i)
  {
    loads_.col(i) = fem::point_load(mesh_, dofs_, options_.sources[static_cast<std::size_t>(i)])
                      .cast<Complex>();
  }
  stiffness_ = fem::stiffness(mesh_, dofs_, [](const fem::Point &) { return 1.0; });
}

double Helmholtz1DFem::boundary_speed(const RealVector &theta) const
{
  return CosineFamily::value(theta, 1.0);
}

galerkin::DiscreteSystem Helmholtz1DFem::assemble(const RealVector &theta) const
{
  if (theta.size() != options_.num_params)
  {
    throw Error(ErrorKind::DimensionMismatch, "parameter vector has the wrong length");
  }
  const double k = options_.k;
  fem::AssemblyCheck check;
  check.min_weight = 0.0;
  const SparseReal Mc = fem::mass(
    mesh_, dofs_,
    [&](const fem::Point &x) {
      const double c = CosineFamily::value(theta, x.x());
      if (c < options_.min_coefficient)
      {
        throw Error(ErrorKind::CoefficientNotPositive, "sound speed below the admissible floor");
      }
      return 1.0 / (c * c);
    },
    check);
  const double c1 = boundary_speed(theta);
  if (c1 < options_.min_coefficient)
  {
    throw Error(ErrorKind::CoefficientNotPositive, "sound speed below the admissible floor");
  }
  galerkin::DiscreteSystem sys;
  sys.K = galerkin::to_complex(stiffness_) - Complex(k * k) * galerkin::to_complex(Mc);
  const int last = dofs_.dof(mesh_.num_nodes() - 1);
  sys.K.coeffRef(last, last) -= kI * (k / c1);
  sys.K.makeCompressed();
  sys.F = loads_;
  sys.R = galerkin::to_complex(stiffness_);
  return sys;
}

std::vector<SystemDerivative> Helmholtz1DFem::derivatives(const RealVector &theta) const
{
  const double k = options_.k;
  const double c1 = boundary_speed(theta);
  const int last = dofs_.dof(mesh_.num_nodes() - 1);
  std::vector<SystemDerivative> out(static_cast<std::size_t>(options_.num_params));
  for (int m = 0; m < options_.num_params; ++m)
  {
    const SparseReal dM = fem::mass(mesh_, dofs_, [&](const fem::Point &x) {
      const double c = CosineFamily::value(theta, x.x());
      return CosineFamily::mode(m, x.x()) / (c * c * c);
    });
    out[m].dK = to_triplets(dM, Complex(2.0 * k * k));
    out[m].dK.emplace_back(last, last, kI * k * CosineFamily::mode(m, 1.0) / (c1 * c1));
  }
  return out;
}

ComplexVector Helmholtz1DFem::boundary_traces(const RealVector &theta) const
{
  const auto sol = solve(theta);
  const int last = dofs_.dof(mesh_.num_nodes() - 1);
  return sol->states().row(last).transpose();
}

std::unique_ptr<ForwardModel> make_helmholtz1d(const Helmholtz1DOptions &options)
{
  if (options.discretization == Helmholtz1DOptions::Discretization::Analytic)
  {
    return std::make_unique<Helmholtz1DAnalytic>(options);
  }
  return std::make_unique<Helmholtz1DFem>(options);
}

MeasurementSet helmholtz1d_synthesize(const Helmholtz1DOptions &options, const RealVector &theta,
                                      const std::vector<double> &grid)
{
  MeasurementSet out;
  for (double k : grid)
  {
    Helmholtz1DOptions o = options;
    o.k = k;
    out.spectral_grid.push_back(k);
    if (o.discretization == Helmholtz1DOptions::Discretization::Analytic)
    {
      const Helmholtz1DAnalytic model(o);
      out.data.push_back(model.evaluate(theta, false).predicted);
      out.boundary_traces.push_back(model.boundary_traces(theta));
    }
    else
    {
      const Helmholtz1DFem model(o);
      const auto sol = model.solve(theta);
      out.data.push_back(sol->predicted_data());
      out.boundary_traces.push_back(model.boundary_traces(theta));
    }
  }
  return out;
}

}  // namespace pdeinv::models
