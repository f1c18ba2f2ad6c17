// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdeinv/inversion.hpp"
#include "pdeinv/models/elliptic1d.hpp"
#include "pdeinv/models/poisson2d.hpp"
#include "pdeinv/models/schrodinger2d.hpp"

using namespace pdeinv;
using namespace pdeinv::models;

namespace
{

double rosenbrock(const RealVector &x, RealVector &g)
{
  const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
  g.resize(2);
  g(0) = -2.0 * a - 400.0 * x(0) * b;
  g(1) = 200.0 * b;
  return a * a + 100.0 * b * b;
}

void check_descent(const inversion::InversionReport &r)
{
  for (std::size_t i = 1; i < r.objective_history.size(); ++i)
  {
    CHECK(r.objective_history[i] < r.objective_history[i - 1]);
  }
}

}  // namespace

TEST_CASE("L-BFGS solves the Rosenbrock problem")
{
  const ParamBounds none;
  const auto r = inversion::lbfgs_minimize(rosenbrock, (RealVector(2) << -1.2, 1.0).finished(), none);
  CHECK(r.converged);
  CHECK((r.final_theta - RealVector::Ones(2)).norm() <= 1e-6);
  check_descent(r);
  CHECK(r.theta_history.size() == r.objective_history.size());
  CHECK(static_cast<int>(r.objective_history.size()) == r.iterations + 1);
}

TEST_CASE("L-BFGS minimizes a convex quadratic")
{
  std::mt19937_64 rng(3);
  const int n = 6;
  const RealMatrix Q = oracle::random_hermitian_psd(n, rng, 1.0).real();
  const RealVector target = RealVector::LinSpaced(n, -1.0, 1.0);
  auto f = [&](const RealVector &x, RealVector &g)
  {
    g = Q * (x - target);
    return 0.5 * (x - target).dot(g);
  };
  const auto r = inversion::lbfgs_minimize(f, RealVector::Zero(n), ParamBounds{});
  CHECK(r.converged);
  CHECK((r.final_theta - target).norm() <= 1e-6);
  check_descent(r);
}

TEST_CASE("bounds are enforced by projection")
{
  ParamBounds box{RealVector::Constant(2, -0.5), RealVector::Constant(2, 0.5)};
  auto f = [](const RealVector &x, RealVector &g)
  {
    g = (RealVector(2) << 2.0 * (x(0) - 2.0), 2.0 * (x(1) + 0.1)).finished();
    return std::pow(x(0) - 2.0, 2) + std::pow(x(1) + 0.1, 2);
  };
  const auto r = inversion::lbfgs_minimize(f, RealVector::Zero(2), box);
  CHECK(r.converged);
  CHECK(r.final_theta(0) == 0.5);
  CHECK(r.final_theta(1) == doctest::Approx(-0.1).epsilon(1e-8));
  for (const auto &t : r.theta_history)
  {
    CHECK(box.contains(t));
  }
}

TEST_CASE("starting at the truth accepts no step")
{
  Elliptic1DOptions opt;
  const auto model = make_elliptic1d(opt);
  const RealVector truth = (RealVector(3) << 1.0, 0.1, -0.05).finished();
  const ComplexMatrix D = model->evaluate(truth, false).predicted;
  objective::ObjectiveConfig cfg;
  const auto r = inversion::lbfgs_minimize(*model, truth, D, cfg);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.final_objective == 0.0);
  CHECK(r.data_fit == 0.0);
}

TEST_CASE("inverse-crime elliptic inversion recovers the coefficient")
{
  Elliptic1DOptions opt;
  const auto model = make_elliptic1d(opt);
  const RealVector truth = (RealVector(3) << 1.2, 0.1, -0.05).finished();
  const ComplexMatrix D = model->evaluate(truth, false).predicted;
  for (auto metric : {objective::MetricMode::Conventional, objective::MetricMode::Variable})
  {
    objective::ObjectiveConfig cfg;
    cfg.metric = metric;
    cfg.rho = metric == objective::MetricMode::Conventional ? objective::Rho::infinity() : objective::Rho::finite(1.0);
    const auto r = inversion::lbfgs_minimize(*model, (RealVector(3) << 0.8, 0.0, 0.0).finished(), D, cfg);
    CHECK((r.final_theta - truth).norm() <= 1e-6);
    check_descent(r);
  }
}

TEST_CASE("quadratic zero-limit Poisson problem is solved from the far end of the box")
{
  Poisson2DOptions opt;
  opt.mesh = 16;
  opt.num_sources = 16;
  opt.basis = galerkin::BasisMode::SpanOfSources;
  const auto model = make_poisson2d(opt);
  const ComplexMatrix D = model->evaluate(RealVector::Zero(1), false).predicted;
  objective::ObjectiveConfig cfg;
  cfg.rho = objective::Rho::zero_limit();
  const auto r = inversion::lbfgs_minimize(*model, RealVector::Constant(1, 2.0), D, cfg);
  CHECK(std::abs(r.final_theta(0)) <= 1e-6);
  CHECK(r.iterations <= 6);
}

TEST_CASE("direct method is exact on inverse-crime data")
{
  Schrodinger2DOptions opt;
  opt.mesh = 24;
  opt.num_sources = 10;
  opt.num_modes = 3;
  opt.source_width = 10.0;
  Schrodinger2DSpan model(opt);
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
  {
    const RealVector c = schrodinger_random_coefficients(opt, seed);
    const auto sys = model.assemble(c);
    const ComplexMatrix D = galerkin::predicted_data(sys);
    const auto r = inversion::direct_method(D, sys, opt.lambda);
    CHECK((r.coefficients - c).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(r.rank == 3);
    inversion::DirectOptions all;
    all.full_least_squares = true;
    CHECK((inversion::direct_method(D, sys, opt.lambda, all).coefficients - c).cwiseAbs().maxCoeff() <= 1e-8);
  }
  const auto sys0 = model.assemble(RealVector::Zero(3));
  const auto r0 = inversion::direct_method(galerkin::predicted_data(sys0), sys0, opt.lambda);
  CHECK(r0.coefficients.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("direct method reports singular data and rank deficiency")
{
  Schrodinger2DOptions opt;
  opt.mesh = 12;
  opt.num_sources = 6;
  opt.num_modes = 3;
  opt.source_width = 10.0;
  Schrodinger2DSpan model(opt);
  const auto sys = model.assemble(RealVector::Constant(3, 0.5));
  ComplexMatrix D = galerkin::predicted_data(sys);
  inversion::DirectOptions few;
  few.num_rows = 2;
  try
  {
    inversion::direct_method(D, sys, opt.lambda, few);
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
  D.col(1) = D.col(0);
  D.row(1) = D.row(0);
  try
  {
    inversion::direct_method(D, sys, opt.lambda);
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::SingularData);
  }
}

TEST_CASE("landscape scan: minimum at the truth, thread independence, conventional column")
{
  Elliptic1DOptions opt;
  opt.num_params = 1;
  const auto model = make_elliptic1d(opt);
  const RealVector truth = RealVector::Constant(1, 1.0);
  const ComplexMatrix D = model->evaluate(truth, false).predicted;
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i)
  {
    grid.push_back(0.5 + 0.05 * i);
  }
  std::vector<objective::ObjectiveConfig> configs(3);
  configs[0].rho = objective::Rho::infinity();
  configs[0].metric = objective::MetricMode::Conventional;
  configs[1].rho = objective::Rho::finite(1e-2);
  configs[2].rho = objective::Rho::zero_limit();
  const auto one = inversion::landscape_scan(*model, truth, 0, grid, D, configs, 1);
  const auto four = inversion::landscape_scan(*model, truth, 0, grid, D, configs, 4);
  for (std::size_t c = 0; c < configs.size(); ++c)
  {
    CHECK(one.curves[c].J == four.curves[c].J);
    CHECK(grid[static_cast<std::size_t>(inversion::grid_argmin(one.curves[c].J))] == doctest::Approx(1.0));
    for (double v : one.curves[c].J)
    {
      CHECK(v >= 0.0);
    }
  }
  for (std::size_t t = 0; t < grid.size(); t += 7)
  {
    const ComplexMatrix E = D - model->evaluate(RealVector::Constant(1, grid[t]), false).predicted;
    CHECK(one.curves[0].J[t] == doctest::Approx(objective::objective_infty(E)).epsilon(1e-14));
  }
  const auto single = inversion::landscape_scan(*model, truth, 0, {1.3}, D, configs, 2);
  CHECK(single.curves[0].J.size() == 1);
}

TEST_CASE("grid-local minima counter")
{
  CHECK(inversion::count_grid_local_minima({3, 2, 1, 2, 3}) == 1);
  CHECK(inversion::count_grid_local_minima({1, 2, 3}) == 0);
  CHECK(inversion::count_grid_local_minima({3, 1, 3, 0, 4, 2, 2, 5}) == 2);
  CHECK(inversion::grid_argmin({3, 1, 3, 0, 4}) == 3);
}
