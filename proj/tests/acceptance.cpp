// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. `acceptance 3 7` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pdeinv/datadriven.hpp"
#include "pdeinv/inversion.hpp"
#include "pdeinv/models/elliptic1d.hpp"
#include "pdeinv/models/helmholtz1d.hpp"
#include "pdeinv/models/poisson2d.hpp"
#include "pdeinv/models/schrodinger2d.hpp"
#include "pdeinv/models/seismic2d.hpp"
#include "pdeinv/objective.hpp"

using namespace pdeinv;
using namespace pdeinv::models;
using objective::MetricMode;
using objective::Rho;

namespace
{

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what)
  {
    if (!ok)
    {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ½ tr(E*(I + G/ρ)⁻¹E) by hand-written elimination.
double reference_objective(const ComplexMatrix &E, const ComplexMatrix &G, double rho)
{
  const Index n = G.rows();
  const ComplexMatrix X = oracle::eliminate(ComplexMatrix::Identity(n, n) + G / rho, E);
  return 0.5 * (E.adjoint() * X).trace().real();
}

void woodbury(Outcome &out)
{
  std::mt19937_64 rng(2024);
  const Index sizes[] = {2, 5, 10};
  double worst = 0.0, worst_ref = 0.0;
  for (int t = 0; t < 50; ++t)
  {
    const Index n = sizes[t % 3];
    const ComplexMatrix G = oracle::random_hermitian_psd(n, rng);
    const ComplexMatrix E = oracle::random_complex(n, n, rng);
    for (double rho : {1e-3, 1.0, 1e3})
    {
      const double inner = objective::representer_coefficients(G, E, rho).objective_value;
      const double reduced = objective::objective_rho(E, G, Rho::finite(rho));
      worst = std::max(worst, std::abs(inner - reduced) / std::abs(reduced));
      worst_ref = std::max(worst_ref, std::abs(reduced - reference_objective(E, G, rho)) / std::abs(reduced));
    }
  }
  out.detail << "max relative gap inner vs reduced " << worst << ", reduced vs elimination " << worst_ref
             << " over 50 instances x 3 rho";
  out.require(worst <= 1e-10, "inner optimum equals reduced objective to 1e-10");
  out.require(worst_ref <= 1e-10, "reduced objective matches elimination oracle");
}

void limits(Outcome &out)
{
  Elliptic1DOptions opt;  // five receivers at i/6
  const auto model = make_elliptic1d(opt);
  const RealVector truth = (RealVector(3) << 1.0, 0.1, -0.05).finished();
  const RealVector theta = (RealVector(3) << 1.3, -0.1, 0.08).finished();
  const ComplexMatrix D = model->evaluate(truth, false).predicted;
  const auto ev = model->evaluate(theta, true);
  const ComplexMatrix E = D - ev.predicted;
  const ComplexMatrix &G = *ev.gram;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(G);
  const double gmax = eig.eigenvalues().maxCoeff(), gmin = eig.eigenvalues().minCoeff();
  const double jinf = objective::objective_infty(E), j0 = objective::objective_zero(E, G);
  double lo = 10.0, hi = -10.0;
  out.detail << "large-rho orders";
  for (double s : {1e2, 1e3, 1e4})
  {
    const double a = std::abs(objective::objective_rho(E, G, Rho::finite(s * gmax)) - jinf);
    const double b = std::abs(objective::objective_rho(E, G, Rho::finite(2 * s * gmax)) - jinf);
    const double order = std::log2(a / b);
    out.detail << " " << order;
    lo = std::min(lo, order);
    hi = std::max(hi, order);
  }
  out.detail << "; small-rho orders";
  for (double s : {1e-2, 1e-3, 1e-4})
  {
    const double r = s * gmin;
    const double a = std::abs(objective::objective_rho(E, G, Rho::finite(r)) / r - j0);
    const double b = std::abs(objective::objective_rho(E, G, Rho::finite(r / 2)) / (r / 2) - j0);
    const double order = std::log2(a / b);
    out.detail << " " << order;
    lo = std::min(lo, order);
    hi = std::max(hi, order);
  }
  out.require(lo >= 0.8 && hi <= 1.2, "empirical orders in [0.8, 1.2]");
}

template <class Model>
double projection_gap(const Model &model, const RealVector &truth, const std::vector<RealVector> &points)
{
  const auto ref = model.assemble(truth);
  double worst = 0.0;
  for (const auto &theta : points)
  {
    const auto cur = model.assemble(theta);
    const auto sol = objective::projection_solution_residual(cur, ref);
    const auto pde = objective::projection_pde_residual(cur, ref);
    worst = std::max(worst, std::abs(sol.projection - sol.objective) / std::abs(sol.objective));
    worst = std::max(worst, std::abs(pde.projection - pde.objective) / std::abs(pde.objective));
  }
  return worst;
}

void projections(Outcome &out)
{
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  Elliptic1DOptions eopt;
  eopt.discretization = Elliptic1DOptions::Discretization::Fem;
  eopt.inner_product = galerkin::InnerProductMode::CoefficientIndependent;
  const Elliptic1DFem elliptic(eopt);
  const RealVector etruth = (RealVector(3) << 1.0, 0.1, -0.05).finished();
  std::vector<RealVector> epoints;
  for (int p = 0; p < 5; ++p)
  {
    epoints.push_back((RealVector(3) << 0.6 + 1.2 * u(rng), 0.3 * u(rng) - 0.15, 0.3 * u(rng) - 0.15).finished());
  }
  const double egap = projection_gap(elliptic, etruth, epoints);

  Poisson2DOptions popt;
  popt.mesh = 16;
  popt.num_sources = 5;
  const Poisson2DFem poisson(popt);
  std::vector<RealVector> ppoints;
  for (int p = 0; p < 5; ++p)
  {
    ppoints.push_back(RealVector::Constant(1, 0.1 + 1.8 * u(rng)));
  }
  const double pgap = projection_gap(poisson, RealVector::Zero(1), ppoints);
  out.detail << "max relative gap elliptic1d " << egap << ", poisson2d " << pgap << " (5 points each)";
  out.require(egap <= 1e-9 && pgap <= 1e-9, "projections equal J_inf and J_0 to 1e-9");
}

void data_grams(Outcome &out)
{
  Elliptic1DOptions eopt;
  const RealVector etruth = (RealVector(3) << 1.0, 0.1, -0.05).finished();
  const auto eev = make_elliptic1d(eopt)->evaluate(etruth, true);
  const double ea = oracle::rel_err(datadriven::elliptic_gram_from_data(eev.predicted).G, *eev.gram);

  Helmholtz1DOptions hopt;
  hopt.sources = uniform_interior_points(10);
  const RealVector htruth = RealVector::Constant(1, 1.0);
  const ComplexMatrix HG = *make_helmholtz1d(hopt)->evaluate(htruth, true).gram;
  auto herr = [&](double h)
  {
    const auto ms = helmholtz1d_synthesize(hopt, htruth, {hopt.k - h, hopt.k, hopt.k + h});
    const auto dg =
      datadriven::helmholtz_gram_from_data(ms.data[0], ms.data[1], ms.data[2], ms.boundary_traces[0],
                                           ms.boundary_traces[1], ms.boundary_traces[2], hopt.k, h, htruth(0));
    return oracle::rel_err(dg.G, HG);
  };
  const double hratio = herr(1e-2) / herr(5e-3), habs = herr(1e-3);

  Schrodinger2DOptions sopt;
  sopt.mesh = 16;
  sopt.num_sources = 6;
  sopt.num_modes = 3;
  sopt.lambda = 5.0;
  sopt.basis = galerkin::BasisMode::FullFem;
  sopt.inner_product = galerkin::InnerProductMode::CoefficientDependent;
  const Schrodinger2DFem smodel(sopt);
  const RealVector c = schrodinger_random_coefficients(sopt, 7);
  const auto sev = smodel.evaluate(c, true);
  auto serr = [&](double h)
  {
    auto data = [&](double l) { return smodel.at_lambda(l).evaluate(c, false).predicted; };
    const auto dg = datadriven::schrodinger_gram_from_data(data(sopt.lambda - h), sev.predicted,
                                                           data(sopt.lambda + h), sopt.lambda, h);
    return oracle::rel_err(dg.G, *sev.gram);
  };
  const double sratio = serr(0.2) / serr(0.1);
  out.detail << "(a) elliptic rel err " << ea << "; (b) helmholtz ratio " << hratio << ", err at h=1e-3 " << habs
             << "; (c) schrodinger ratio " << sratio;
  out.require(ea <= 1e-6, "(a) elliptic <= 1e-6");
  out.require(hratio >= 3.5 && hratio <= 4.5, "(b) helmholtz ratio in [3.5, 4.5]");
  out.require(habs <= 1e-4, "(b) helmholtz error <= 1e-4");
  out.require(sratio >= 3.5 && sratio <= 4.5, "(c) schrodinger ratio in [3.5, 4.5]");
}

void quadraticity(Outcome &out)
{
  Poisson2DOptions opt;
  opt.mesh = 16;
  opt.num_sources = 16;
  opt.basis = galerkin::BasisMode::SpanOfSources;
  const Poisson2DSpan model(opt);
  const ComplexMatrix D = model.evaluate(RealVector::Zero(1), false).predicted;
  auto J = [&](double t) { return objective::objective_zero_span(model.assemble(RealVector::Constant(1, t)), D); };
  const double h = 0.1;
  std::vector<double> values;
  double scale = 0.0;
  for (int i = 0; i <= 20; ++i)
  {
    values.push_back(J(i * h));
    scale = std::max(scale, std::abs(values.back()));
  }
  double third = 0.0;
  for (std::size_t i = 0; i + 3 < values.size(); ++i)
  {
    third = std::max(third, std::abs(values[i + 3] - 3 * values[i + 2] + 3 * values[i + 1] - values[i]));
  }
  objective::ObjectiveConfig cfg;
  cfg.rho = Rho::zero_limit();
  const auto r = inversion::lbfgs_minimize(model, RealVector::Constant(1, 2.0), D, cfg);
  out.detail << "max third difference / max|J| " << third / scale << "; L-BFGS from 2 -> " << r.final_theta(0)
             << " in " << r.iterations << " iterations";
  out.require(third <= 1e-6 * scale, "third differences <= 1e-6 scale");
  out.require(std::abs(r.final_theta(0)) <= 1e-6, "|theta| <= 1e-6");
}

void direct(Outcome &out)
{
  Schrodinger2DOptions opt;
  opt.mesh = 32;
  opt.num_sources = 14;
  opt.num_modes = 3;
  opt.lambda = 1.0;
  double crime = 0.0;
  {
    opt.source_width = 10.0;
    const Schrodinger2DSpan span(opt);
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      const RealVector c = schrodinger_random_coefficients(opt, seed);
      const auto sys = span.assemble(c);
      const auto r = inversion::direct_method(galerkin::predicted_data(sys), sys, opt.lambda);
      crime = std::max(crime, (r.coefficients - c).cwiseAbs().maxCoeff());
    }
  }
  double mean_err[3] = {0, 0, 0};
  const double widths[3] = {1.0, 3.0, 10.0};
  for (int w = 0; w < 3; ++w)
  {
    opt.source_width = widths[w];
    const Schrodinger2DSpan span(opt);
    auto fem_opt = opt;
    fem_opt.basis = galerkin::BasisMode::FullFem;
    const Schrodinger2DFem fem(fem_opt);
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
      const RealVector c = schrodinger_random_coefficients(opt, seed);
      const auto r = inversion::direct_method(fem.evaluate(c, false).predicted, span.assemble(c), opt.lambda);
      mean_err[w] += (r.coefficients - c).norm() / c.norm() / 10.0;
    }
  }
  out.detail << "inverse-crime max error " << crime << "; out-of-span mean relative error a=1: " << mean_err[0]
             << ", a=3: " << mean_err[1] << ", a=10: " << mean_err[2];
  out.require(crime <= 1e-8, "inverse crime <= 1e-8");
  out.require(mean_err[0] <= mean_err[1] && mean_err[1] <= mean_err[2], "width ordering");
}

void helmholtz_landscape(Outcome &out)
{
  Helmholtz1DOptions opt;
  opt.k = 20.0;
  opt.sources = uniform_interior_points(10);
  const auto model = make_helmholtz1d(opt);
  const RealVector truth = RealVector::Constant(1, 1.0);
  const double h = 1e-3;
  const auto ms = helmholtz1d_synthesize(opt, truth, {opt.k - h, opt.k, opt.k + h});
  const auto dg = datadriven::helmholtz_gram_from_data(ms.data[0], ms.data[1], ms.data[2], ms.boundary_traces[0],
                                                       ms.boundary_traces[1], ms.boundary_traces[2], opt.k, h,
                                                       truth(0));
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i)
  {
    grid.push_back(0.5 + 1.5 * i / 200.0);
  }
  objective::ObjectiveConfig conv, var, dd;
  conv.metric = MetricMode::Conventional;
  conv.rho = Rho::infinity();
  var.rho = Rho::finite(1e-3);
  dd = var;
  dd.metric = MetricMode::DataDriven;
  dd.data_gram = dg.G;
  const auto scan = inversion::landscape_scan(*model, truth, 0, grid, ms.data[1], {conv, var, dd}, 4);
  const int mc = inversion::count_grid_local_minima(scan.curves[0].J);
  const int mv = inversion::count_grid_local_minima(scan.curves[1].J);
  const Index av = inversion::grid_argmin(scan.curves[1].J), ad = inversion::grid_argmin(scan.curves[2].J);
  out.detail << "k=20, c in [0.5, 2], 201 points: conventional minima " << mc << ", variable (rho=1e-3) minima "
             << mv << ", argmin variable c=" << grid[static_cast<std::size_t>(av)]
             << ", data-driven c=" << grid[static_cast<std::size_t>(ad)];
  out.require(mc >= 2, "conventional has >= 2 minima");
  out.require(mv == 1, "variable has exactly 1 minimum");
  out.require(std::abs(av - ad) <= 1, "argmins within one cell");
}

void seismic(Outcome &out)
{
  const Seismic2DOptions opt;  // 4 Hz, h = 0.02, 31 sources, 26 x 9 velocity nodes
  const Seismic2D model(opt);
  const ComplexMatrix D = model.data_for_velocity(layered_velocity);
  const RealVector start = model.sample(linear_velocity(opt.depth));
  const auto dg = datadriven::wave_gram_from_data(D);
  inversion::LbfgsOptions budget;
  budget.max_iterations = 30;
  objective::ObjectiveConfig conv, var, dd;
  conv.metric = MetricMode::Conventional;
  conv.rho = Rho::infinity();
  var.rho = Rho::finite(1.0);
  dd = var;
  dd.metric = MetricMode::DataDriven;
  dd.data_gram = dg.G;
  const double fc = inversion::lbfgs_minimize(model, start, D, conv, budget).data_fit;
  const double fv = inversion::lbfgs_minimize(model, start, D, var, budget).data_fit;
  const double fd = inversion::lbfgs_minimize(model, start, D, dd, budget).data_fit;
  out.detail << "relative misfit after 30 iterations: conventional " << fc << ", variable " << fv
             << ", data-driven " << fd;
  out.require(fv < fc, "variable below conventional");
  out.require(fd < fc, "data-driven below conventional");
}

struct GradientCase
{
  std::string name;
  std::shared_ptr<ForwardModel> model;
  RealVector truth;
};

constexpr double kStep = 1e-4;  // central-difference step

void gradients(Outcome &out)
{
  std::vector<GradientCase> cases;
  {
    Elliptic1DOptions o;
    const RealVector t = (RealVector(3) << 1.0, 0.1, -0.05).finished();
    cases.push_back({"elliptic1d/analytic", make_elliptic1d(o), t});
    o.discretization = Elliptic1DOptions::Discretization::Fem;
    o.cells = 128;
    cases.push_back({"elliptic1d/fem", make_elliptic1d(o), t});
  }
  {
    Poisson2DOptions o;
    o.mesh = 12;
    o.num_sources = 6;
    cases.push_back({"poisson2d/fem", make_poisson2d(o), RealVector::Constant(1, 0.5)});
    o.basis = galerkin::BasisMode::SpanOfSources;
    cases.push_back({"poisson2d/span", make_poisson2d(o), RealVector::Constant(1, 0.5)});
  }
  {
    Helmholtz1DOptions o;
    cases.push_back({"helmholtz1d/analytic", make_helmholtz1d(o), RealVector::Constant(1, 1.0)});
    o.discretization = Helmholtz1DOptions::Discretization::Fem;
    o.num_params = 3;
    o.cells = 200;
    cases.push_back({"helmholtz1d/fem", make_helmholtz1d(o), (RealVector(3) << 1.0, 0.1, -0.05).finished()});
  }
  {
    Schrodinger2DOptions o;
    o.mesh = 12;
    o.num_sources = 6;
    o.num_modes = 3;
    cases.push_back({"schrodinger2d/span", make_schrodinger2d(o), schrodinger_random_coefficients(o, 1)});
    o.basis = galerkin::BasisMode::FullFem;
    o.inner_product = galerkin::InnerProductMode::CoefficientDependent;
    cases.push_back({"schrodinger2d/fem", make_schrodinger2d(o), schrodinger_random_coefficients(o, 1)});
  }
  {
    Seismic2DOptions o;
    o.spacing = 0.1;
    o.pml_cells = 8;
    o.frequency = 1.5;
    o.num_sources = 5;
    o.source_depth = 0.2;
    o.source_sigma = 0.12;
    o.param_nx = 5;
    o.param_nz = 3;
    auto m = std::make_shared<Seismic2D>(o);
    const RealVector t = m->sample(layered_velocity);
    cases.push_back({"seismic2d", m, t});
  }

  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  double worst = 0.0;
  std::string worst_case;
  int checks = 0;
  for (const auto &gc : cases)
  {
    const auto &model = *gc.model;
    const auto ev = model.evaluate(gc.truth, true);
    const auto bounds = model.bounds();
    objective::ObjectiveConfig conv, var, dd;
    conv.metric = MetricMode::Conventional;
    conv.rho = Rho::infinity();
    var.rho = Rho::finite(0.5);
    dd = var;
    dd.metric = MetricMode::DataDriven;
    dd.data_gram = *ev.gram;
    for (const auto *cfg : {&conv, &var, &dd})
    {
      for (int p = 0; p < 5; ++p)
      {
        RealVector theta(model.num_params());
        for (Index k = 0; k < theta.size(); ++k)
        {
          theta(k) = bounds.lower(k) + u(rng) * (bounds.upper(k) - bounds.lower(k));
        }
        const auto res = objective::evaluate(model, theta, ev.predicted, *cfg, true);
        const RealVector fd = oracle::fd_gradient(
          [&](const RealVector &t) { return objective::evaluate(model, t, ev.predicted, *cfg, false).value; }, theta,
          kStep);
        const double err = (res.gradient - fd).norm() / fd.norm();
        ++checks;
        if (err > worst)
        {
          worst = err;
          worst_case = gc.name + "/" + objective::to_string(cfg->metric);
        }
      }
    }
  }
  out.detail << checks << " gradient checks over " << cases.size()
             << " models x 3 metrics; worst relative error " << worst << " (" << worst_case << ")";
  out.require(worst <= 1e-5, "relative error <= 1e-5");
}

struct Criterion
{
  int id;
  const char *title;
  double time_limit;  // seconds; 0 for none
  std::function<void(Outcome &)> run;
};

}  // namespace

int main(int argc, char **argv)
{
  const std::vector<Criterion> criteria = {
    {1, "Woodbury/representer equivalence", 1.0, woodbury},
    {2, "limit expansions", 0.0, limits},
    {3, "projection theorems", 0.0, projections},
    {4, "data-driven Grams", 30.0, data_grams},
    {5, "quadraticity of J_0 on the span", 0.0, quadraticity},
    {6, "direct method", 60.0, direct},
    {7, "Helmholtz landscape", 60.0, helmholtz_landscape},
    {8, "seismic misfit ordering", 900.0, seismic},
    {9, "gradient correctness", 0.0, gradients},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i)
  {
    selected.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (const auto &c : criteria)
  {
    if (!selected.empty() && !selected.count(c.id))
    {
      continue;
    }
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
      c.run(out);
    }
    catch (const std::exception &e)
    {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = since(t0);
    if (c.time_limit > 0.0)
    {
      out.require(seconds < c.time_limit, "runtime under " + std::to_string(static_cast<int>(c.time_limit)) + " s");
    }
    failures += out.pass ? 0 : 1;
    std::printf("criterion %d %s: %s (%.2f s) %s\n", c.id, out.pass ? "PASS" : "FAIL", c.title, seconds,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
