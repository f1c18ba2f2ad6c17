// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdeinv/datadriven.hpp"
#include "pdeinv/models/elliptic1d.hpp"
#include "pdeinv/models/helmholtz1d.hpp"
#include "pdeinv/models/schrodinger2d.hpp"
#include "pdeinv/objective.hpp"

using namespace pdeinv;
using namespace pdeinv::models;

TEST_CASE("transpose rule on symmetric and identity data")
{
  std::mt19937_64 rng(11);
  const ComplexMatrix X = oracle::random_hermitian_psd(4, rng, 0.5).real().cast<Complex>();
  CHECK((datadriven::elliptic_gram_from_data(X).G - X).norm() <= 1e-14 * X.norm());
  const ComplexMatrix I = ComplexMatrix::Identity(3, 3);
  CHECK((datadriven::elliptic_gram_from_data(I).G - I).norm() == 0.0);
}

TEST_CASE("transpose rule rejects asymmetric data")
{
  ComplexMatrix D = ComplexMatrix::Identity(3, 3);
  D(0, 1) = 0.1;
  try
  {
    datadriven::elliptic_gram_from_data(D);
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::AsymmetricData);
  }
}

TEST_CASE("transpose rule reproduces the model Gram of the elliptic problem")
{
  Elliptic1DOptions opt;
  opt.sources = {0.3, 0.5, 0.8};
  for (auto disc : {Elliptic1DOptions::Discretization::Analytic, Elliptic1DOptions::Discretization::Fem})
  {
    opt.discretization = disc;
    const RealVector truth = (RealVector(3) << 1.0, 0.0, 0.0).finished();
    const auto ev = make_elliptic1d(opt)->evaluate(truth, true);
    const auto dg = datadriven::elliptic_gram_from_data(ev.predicted);
    CHECK(oracle::rel_err(dg.G, *ev.gram) <= 1e-6);
    CHECK(dg.clipped == 0);
  }
}

TEST_CASE("Helmholtz data Gram converges at second order to the model Gram")
{
  for (auto disc : {Helmholtz1DOptions::Discretization::Analytic, Helmholtz1DOptions::Discretization::Fem})
  {
    Helmholtz1DOptions opt;
    opt.discretization = disc;
    opt.cells = 1000;
    const RealVector truth = RealVector::Constant(1, 1.0);
    const ComplexMatrix G = make_helmholtz1d(opt)->evaluate(truth, true).gram.value();
    auto error = [&](double h)
    {
      const auto ms = helmholtz1d_synthesize(opt, truth, {opt.k - h, opt.k, opt.k + h});
      const auto dg = datadriven::helmholtz_gram_from_data(ms.data[0], ms.data[1], ms.data[2],
                                                           ms.boundary_traces[0], ms.boundary_traces[1],
                                                           ms.boundary_traces[2], opt.k, h, 1.0);
      return oracle::rel_err(dg.G, G);
    };
    const double e1 = error(1e-2), e2 = error(5e-3);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
    CHECK(error(1e-3) <= 1e-4);
  }
}

TEST_CASE("Helmholtz formula without boundary traces reduces to Re(d + (k/2)d')")
{
  std::mt19937_64 rng(5);
  auto sym = [&]
  {
    const ComplexMatrix X = oracle::random_complex(3, 3, rng);
    return ComplexMatrix(X + X.transpose());
  };
  const ComplexMatrix Dm = sym(), D = sym(), Dp = sym();
  const ComplexVector zero = ComplexVector::Zero(3);
  const double k = 7.0, h = 0.01;
  const RealMatrix expected = (D + (k / 2) * (Dp - Dm) / (2 * h)).real();
  const auto dg = datadriven::helmholtz_gram_from_data(Dm, D, Dp, zero, zero, zero, k, h, 1.0);
  // the estimate is symmetric already; flooring only touches negative eigenvalues
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(expected);
  const RealMatrix floored =
    eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() * eig.eigenvectors().transpose();
  const ComplexMatrix reference = floored.cast<Complex>();
  CHECK(oracle::rel_err(dg.G, reference) <= 1e-12);
}

TEST_CASE("Schrodinger data Gram at zero shift is the data itself")
{
  Schrodinger2DOptions opt;
  opt.mesh = 12;
  opt.num_sources = 4;
  opt.lambda = 0.0;
  opt.basis = galerkin::BasisMode::FullFem;
  Schrodinger2DFem model(opt);
  const RealVector c = schrodinger_random_coefficients(opt, 3);
  const ComplexMatrix D = model.evaluate(c, false).predicted;
  const ComplexMatrix Dp = model.at_lambda(0.1).evaluate(c, false).predicted;
  const auto dg = datadriven::schrodinger_gram_from_data(std::nullopt, D, Dp, 0.0, 0.1);
  CHECK(oracle::rel_err(dg.G, D) <= 1e-15);
}

TEST_CASE("Schrodinger data Gram: symmetry and convergence orders")
{
  Schrodinger2DOptions opt;
  opt.mesh = 16;
  opt.num_sources = 3;
  opt.lambda = 5.0;
  opt.basis = galerkin::BasisMode::FullFem;
  opt.inner_product = galerkin::InnerProductMode::CoefficientDependent;
  Schrodinger2DFem model(opt);
  const RealVector c = schrodinger_random_coefficients(opt, 7);
  const auto ev = model.evaluate(c, true);
  auto data = [&](double lambda) { return model.at_lambda(lambda).evaluate(c, false).predicted; };
  auto central = [&](double h)
  {
    const auto dg = datadriven::schrodinger_gram_from_data(data(opt.lambda - h), ev.predicted,
                                                           data(opt.lambda + h), opt.lambda, h);
    CHECK(dg.symmetry_defect <= 1e-8);
    return oracle::rel_err(dg.G, *ev.gram);
  };
  auto one_sided = [&](double h)
  {
    const auto dg =
      datadriven::schrodinger_gram_from_data(std::nullopt, ev.predicted, data(opt.lambda + h), opt.lambda, h);
    return oracle::rel_err(dg.G, *ev.gram);
  };
  const double r2 = central(0.2) / central(0.1);
  CHECK(r2 >= 3.5);
  CHECK(r2 <= 4.5);
  const double r1 = one_sided(0.2) / one_sided(0.1);
  CHECK(r1 >= 1.8);
  CHECK(r1 <= 2.2);
}

TEST_CASE("estimates are positive semidefinite after flooring")
{
  std::mt19937_64 rng(17);
  const ComplexMatrix X = oracle::random_hermitian_psd(5, rng, 0.0, 3).real().cast<Complex>();
  ComplexMatrix D = X - 0.3 * ComplexMatrix::Identity(5, 5);
  const auto dg = datadriven::elliptic_gram_from_data(D);
  CHECK(dg.clipped >= 1);
  CHECK(dg.min_eigenvalue_before < 0.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(dg.G);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
}

TEST_CASE("any data Gram gives zero objective at zero residual")
{
  std::mt19937_64 rng(23);
  const ComplexMatrix G = oracle::random_hermitian_psd(4, rng, 0.1);
  const ComplexMatrix E = ComplexMatrix::Zero(4, 4);
  CHECK(objective::objective_rho(E, G, objective::Rho::finite(1.0)) == 0.0);
  CHECK(objective::objective_rho(E, G, objective::Rho::zero_limit()) == 0.0);
}
