// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pdeinv/models/schrodinger2d.hpp"
#include "pdeinv/objective.hpp"

using namespace pdeinv;
using namespace pdeinv::models;

namespace
{

Schrodinger2DOptions small()
{
  Schrodinger2DOptions opt;
  opt.mesh = 16;
  opt.num_sources = 6;
  opt.num_modes = 3;
  opt.source_width = 10.0;
  return opt;
}

}  // namespace

TEST_CASE("potential modes and seeded coefficients")
{
  CHECK(schrodinger_mode(2, {0.3, 0.1}) ==
        doctest::Approx(std::pow(std::sin(0.6), 2) + std::pow(std::sin(0.2), 2)).epsilon(1e-15));
  const auto opt = small();
  const RealVector a = schrodinger_random_coefficients(opt, 42), b = schrodinger_random_coefficients(opt, 42);
  CHECK((a - b).norm() == 0.0);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(a.maxCoeff() <= 1.0);
  CHECK((schrodinger_random_coefficients(opt, 43) - a).norm() > 0.0);
}

TEST_CASE("zero potential and zero shift give A = M on the span")
{
  auto opt = small();
  opt.lambda = 0.0;
  Schrodinger2DSpan model(opt);
  const auto sys = model.assemble(RealVector::Zero(opt.num_modes));
  CHECK((sys.A - sys.M).norm() <= 1e-15 * sys.M.norm());
  REQUIRE(sys.S);
  REQUIRE(sys.H.size() == 3);
}

TEST_CASE("span matrices are the L2 and H1 Grams of the representers")
{
  const auto opt = small();
  Schrodinger2DSpan model(opt);
  const auto &sp = model.space();
  // representers by an independent dense solve of the stiffness system
  const RealMatrix L = RealMatrix(sp.L);
  const RealMatrix p = L.ldlt().solve(RealMatrix(sp.F.real()));
  const RealVector c = schrodinger_random_coefficients(opt, 1);
  const auto sys = model.assemble(c);
  CHECK(oracle::rel_err(sys.M, (p.transpose() * L * p).cast<Complex>()) <= 1e-10);
  CHECK(oracle::rel_err(*sys.S, (p.transpose() * RealMatrix(sp.mass) * p).cast<Complex>()) <= 1e-10);
  RealMatrix A = p.transpose() * (L - opt.lambda * RealMatrix(sp.mass)) * p;
  for (int k = 0; k < opt.num_modes; ++k)
  {
    A += c(k) * p.transpose() * RealMatrix(sp.modes[static_cast<std::size_t>(k)]) * p;
  }
  CHECK(oracle::rel_err(sys.A, A.cast<Complex>()) <= 1e-10);
}

TEST_CASE("data are symmetric and consistent with the generating discretization")
{
  auto opt = small();
  const RealVector c = schrodinger_random_coefficients(opt, 9);
  for (auto basis : {galerkin::BasisMode::FullFem, galerkin::BasisMode::SpanOfSources})
  {
    opt.basis = basis;
    const auto model = make_schrodinger2d(opt);
    const ComplexMatrix D = model->evaluate(c, false).predicted;
    CHECK((D - D.transpose()).norm() <= 1e-10 * D.norm());
    objective::ObjectiveConfig cfg;
    cfg.rho = objective::Rho::infinity();
    CHECK(objective::evaluate(*model, c, D, cfg, false).residual.norm() <= 1e-10 * D.norm());
  }
}

TEST_CASE("span model rejects the weighted inner product")
{
  auto opt = small();
  opt.inner_product = galerkin::InnerProductMode::CoefficientDependent;
  CHECK_THROWS_AS(Schrodinger2DSpan{opt}, Error);
}

TEST_CASE("gradients match central differences")
{
  auto opt = small();
  const RealVector truth = schrodinger_random_coefficients(opt, 2);
  const RealVector theta = schrodinger_random_coefficients(opt, 3);
  for (auto basis : {galerkin::BasisMode::FullFem, galerkin::BasisMode::SpanOfSources})
  {
    for (auto ip : {galerkin::InnerProductMode::CoefficientIndependent,
                    galerkin::InnerProductMode::CoefficientDependent})
    {
      if (basis == galerkin::BasisMode::SpanOfSources && ip == galerkin::InnerProductMode::CoefficientDependent)
      {
        continue;
      }
      opt.basis = basis;
      opt.inner_product = ip;
      const auto model = make_schrodinger2d(opt);
      const ComplexMatrix D = model->evaluate(truth, false).predicted;
      for (const auto &rho : {objective::Rho::finite(1e-3), objective::Rho::infinity()})
      {
        objective::ObjectiveConfig cfg;
        cfg.rho = rho;
        const auto res = objective::evaluate(*model, theta, D, cfg, true);
        const RealVector fd = oracle::fd_gradient(
          [&](const RealVector &t) { return objective::evaluate(*model, t, D, cfg, false).value; }, theta, 1e-5);
        CHECK((res.gradient - fd).norm() <= 1e-5 * fd.norm());
      }
    }
  }
}
