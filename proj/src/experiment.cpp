// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/experiment.hpp"

#include "json.hpp"
#include "pdeinv/io.hpp"

namespace pdeinv::experiment
{

namespace
{

using Json = nlohmann::ordered_json;
using config::ExperimentConfig;
using models::ModelKind;

[[noreturn]] void config_error(const std::string &what)
{
  throw Error(ErrorKind::ConfigError, what);
}

std::vector<double> spectral_values(const ExperimentConfig &c)
{
  if (!c.spectral_grid.empty())
  {
    return c.spectral_grid;
  }
  return {default_spectral_value(c)};
}

bool has_spectral_parameter(ModelKind kind)
{
  return kind == ModelKind::Helmholtz1D || kind == ModelKind::Schrodinger2D || kind == ModelKind::Seismic2D;
}

models::VelocityField profile_velocity(const ExperimentConfig &c, const std::string &profile)
{
  if (profile == "layered")
  {
    return models::layered_velocity;
  }
  return models::linear_velocity(c.seismic2d.depth);
}

ComplexMatrix data_at(const ExperimentConfig &c, double spectral, std::uint64_t seed)
{
  if (c.kind == ModelKind::Seismic2D && (c.truth.profile == "layered" || c.truth.profile == "linear"))
  {
    auto o = c.seismic2d;
    o.frequency = spectral;
    return models::Seismic2D(o).data_for_velocity(profile_velocity(c, c.truth.profile));
  }
  const auto model = build_model(c, spectral);
  return model->evaluate(resolve_theta(c.truth, c, seed), false).predicted;
}

double boundary_speed(const ExperimentConfig &c, const RealVector &theta)
{
  if (c.helmholtz1d.discretization == models::Helmholtz1DOptions::Discretization::Analytic)
  {
    return theta(0);
  }
  return models::CosineFamily::value(theta, 1.0);
}

std::string gram_rule(const ExperimentConfig &c)
{
  if (c.data_gram.rule != "auto")
  {
    return c.data_gram.rule;
  }
  switch (c.kind)
  {
    case ModelKind::Elliptic1D:
    case ModelKind::Poisson2D: return "transpose";
    case ModelKind::Helmholtz1D: return "helmholtz";
    case ModelKind::Schrodinger2D: return "schrodinger";
    case ModelKind::Seismic2D: return "wave";
  }
  return "transpose";
}

std::vector<objective::ObjectiveConfig> objective_configs(const ExperimentConfig &c, const ComplexMatrix &D,
                                                          std::uint64_t seed)
{
  std::vector<objective::ObjectiveConfig> out;
  std::optional<ComplexMatrix> gram;
  for (const auto &spec : c.objectives)
  {
    objective::ObjectiveConfig oc;
    oc.rho = spec.rho;
    oc.metric = spec.metric;
    if (spec.metric == objective::MetricMode::DataDriven)
    {
      if (!gram)
      {
        gram = estimate_data_gram(c, D, seed).G;
      }
      oc.data_gram = gram;
    }
    out.push_back(std::move(oc));
  }
  return out;
}

std::filesystem::path emit(const std::filesystem::path &dir, const std::string &name, const std::string &content,
                           std::vector<std::filesystem::path> &written)
{
  const auto path = dir / name;
  io::write_atomic(path, content);
  written.push_back(path);
  return path;
}

Json vector_json(const RealVector &v)
{
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<std::filesystem::path> cmd_synthesize(const ExperimentConfig &c, const RunOptions &opt)
{
  std::vector<std::filesystem::path> written;
  const auto set = synthesize(c, opt.seed);
  for (std::size_t s = 0; s < set.data.size(); ++s)
  {
    emit(opt.out, "data_" + std::to_string(s) + ".csv", io::matrix_csv(set.data[s]), written);
    if (s < set.boundary_traces.size())
    {
      emit(opt.out, "traces_" + std::to_string(s) + ".csv", io::matrix_csv(set.boundary_traces[s]), written);
    }
  }
  Json meta;
  meta["model"] = models::to_string(c.kind);
  meta["seed"] = opt.seed;
  meta["spectral_grid"] = set.spectral_grid;
  meta["num_sources"] = set.data.front().rows();
  switch (c.kind)
  {
    case ModelKind::Elliptic1D:
      meta["mesh"] = c.elliptic1d.discretization == models::Elliptic1DOptions::Discretization::Analytic
                       ? Json("analytic")
                       : Json(c.elliptic1d.cells);
      meta["units"] = "nondimensional";
      break;
    case ModelKind::Poisson2D:
      meta["mesh"] = c.poisson2d.mesh;
      meta["units"] = "nondimensional";
      break;
    case ModelKind::Helmholtz1D:
      meta["mesh"] = c.helmholtz1d.discretization == models::Helmholtz1DOptions::Discretization::Analytic
                       ? Json("analytic")
                       : Json(c.helmholtz1d.cells);
      meta["units"] = "nondimensional; spectral value is the wavenumber k";
      break;
    case ModelKind::Schrodinger2D:
      meta["mesh"] = c.schrodinger2d.mesh;
      meta["units"] = "nondimensional; spectral value is the shift lambda";
      break;
    case ModelKind::Seismic2D:
      meta["mesh"] = c.seismic2d.spacing;
      meta["units"] = "km, km/s; spectral value is the frequency in Hz";
      break;
  }
  meta["noise_level"] = c.noise.level;
  emit(opt.out, "metadata.json", meta.dump(2) + "\n", written);
  return written;
}

std::vector<std::filesystem::path> cmd_landscape(const ExperimentConfig &c, const RunOptions &opt)
{
  std::vector<std::filesystem::path> written;
  const auto model = build_model(c);
  const ComplexMatrix D = observed_data(c, opt.seed);
  const RealVector base = resolve_theta(c.truth, c, opt.seed);
  if (c.landscape.param < 0 || c.landscape.param >= model->num_params())
  {
    config_error("landscape.param is out of range");
  }
  std::vector<double> grid(static_cast<std::size_t>(c.landscape.points));
  for (int g = 0; g < c.landscape.points; ++g)
  {
    grid[static_cast<std::size_t>(g)] =
      c.landscape.points == 1 ? c.landscape.min
                              : c.landscape.min + (c.landscape.max - c.landscape.min) * g / (c.landscape.points - 1);
  }
  const auto scan = inversion::landscape_scan(*model, base, c.landscape.param, grid, D,
                                              objective_configs(c, D, opt.seed), opt.threads);
  emit(opt.out, "curves.csv", io::curves_csv(scan), written);
  Json summary = Json::array();
  for (const auto &curve : scan.curves)
  {
    const auto arg = inversion::grid_argmin(curve.J);
    summary.push_back({{"rho", curve.rho.to_string()},
                       {"mode", objective::to_string(curve.metric)},
                       {"argmin_theta", grid[static_cast<std::size_t>(arg)]},
                       {"grid_local_minima", inversion::count_grid_local_minima(curve.J)}});
  }
  emit(opt.out, "landscape.json", summary.dump(2) + "\n", written);
  return written;
}

std::vector<std::filesystem::path> cmd_invert(const ExperimentConfig &c, const RunOptions &opt)
{
  std::vector<std::filesystem::path> written;
  if (c.initial.empty())
  {
    config_error("invert needs an initial guess");
  }
  const auto model = build_model(c);
  const ComplexMatrix D = observed_data(c, opt.seed);
  const RealVector initial = resolve_theta(c.initial, c, opt.seed);
  const auto configs = objective_configs(c, D, opt.seed);
  for (std::size_t i = 0; i < configs.size(); ++i)
  {
    const auto report = inversion::lbfgs_minimize(*model, initial, D, configs[i], c.optimizer);
    const std::string tag = std::to_string(i);
    emit(opt.out, "report_" + tag + ".json", io::report_json(report, configs[i]), written);
    emit(opt.out, "theta_" + tag + ".csv", io::vector_csv(report.final_theta), written);
    if (const auto *seismic = dynamic_cast<const models::Seismic2D *>(model.get()))
    {
      emit(opt.out, "velocity_" + tag + ".csv", io::grid_csv(models::velocity_grid(*seismic, report.final_theta)),
           written);
    }
  }
  return written;
}

std::vector<std::filesystem::path> cmd_direct(const ExperimentConfig &c, const RunOptions &opt)
{
  std::vector<std::filesystem::path> written;
  if (c.kind != ModelKind::Schrodinger2D || c.schrodinger2d.basis != galerkin::BasisMode::SpanOfSources)
  {
    config_error("direct needs the schrodinger2d model with the span_of_sources basis");
  }
  const models::Schrodinger2DSpan model(c.schrodinger2d);
  const ComplexMatrix D = observed_data(c, opt.seed);
  const auto sys = model.assemble(RealVector::Zero(model.num_params()));
  const auto r = inversion::direct_method(D, sys, c.schrodinger2d.lambda, c.direct);
  emit(opt.out, "coefficients.csv", io::vector_csv(r.coefficients), written);
  Json j;
  j["rank"] = r.rank;
  j["residual"] = r.residual;
  j["coefficients"] = vector_json(r.coefficients);
  if (!c.truth.empty())
  {
    const RealVector truth = resolve_theta(c.truth, c, opt.seed);
    j["max_error"] = (r.coefficients - truth).cwiseAbs().maxCoeff();
  }
  emit(opt.out, "direct.json", j.dump(2) + "\n", written);
  return written;
}

std::vector<std::filesystem::path> cmd_gramcheck(const ExperimentConfig &c, const RunOptions &opt)
{
  std::vector<std::filesystem::path> written;
  const auto model = build_model(c);
  const RealVector truth = resolve_theta(c.truth, c, opt.seed);
  const ComplexMatrix G = *model->evaluate(truth, true).gram;
  const ComplexMatrix D = observed_data(c, opt.seed);
  const std::string rule = gram_rule(c);
  Json j;
  j["model"] = models::to_string(c.kind);
  j["rule"] = rule;
  Json rows = Json::array();
  auto add = [&](std::optional<double> step)
  {
    const auto dg = estimate_data_gram(c, D, opt.seed, step);
    Json row;
    row["step"] = step ? Json(*step) : Json(nullptr);
    row["relative_error"] = (dg.G - G).norm() / G.norm();
    row["symmetry_defect"] = dg.symmetry_defect;
    row["clipped"] = dg.clipped;
    row["provenance"] = dg.provenance;
    rows.push_back(row);
  };
  if (rule == "helmholtz" || rule == "schrodinger")
  {
    for (double h : c.data_gram.check_steps)
    {
      add(h);
    }
  }
  else
  {
    add(std::nullopt);
  }
  j["estimates"] = rows;
  emit(opt.out, "gramcheck.json", j.dump(2) + "\n", written);
  return written;
}

}  // namespace

Command parse_command(const std::string &text)
{
  if (text == "synthesize")
  {
    return Command::Synthesize;
  }
  if (text == "landscape")
  {
    return Command::Landscape;
  }
  if (text == "invert")
  {
    return Command::Invert;
  }
  if (text == "direct")
  {
    return Command::Direct;
  }
  if (text == "gramcheck")
  {
    return Command::Gramcheck;
  }
  config_error("unknown command '" + text + "'");
}

double default_spectral_value(const ExperimentConfig &c)
{
  switch (c.kind)
  {
    case ModelKind::Helmholtz1D: return c.helmholtz1d.k;
    case ModelKind::Schrodinger2D: return c.schrodinger2d.lambda;
    case ModelKind::Seismic2D: return c.seismic2d.frequency;
    default: return 0.0;
  }
}

std::unique_ptr<ForwardModel> build_model(const ExperimentConfig &c, std::optional<double> spectral)
{
  if (spectral && !has_spectral_parameter(c.kind))
  {
    config_error(models::to_string(c.kind) + " has no spectral parameter");
  }
  try
  {
    switch (c.kind)
    {
      case ModelKind::Elliptic1D: return models::make_elliptic1d(c.elliptic1d);
      case ModelKind::Poisson2D: return models::make_poisson2d(c.poisson2d);
      case ModelKind::Helmholtz1D:
      {
        auto o = c.helmholtz1d;
        o.k = spectral.value_or(o.k);
        return models::make_helmholtz1d(o);
      }
      case ModelKind::Schrodinger2D:
      {
        auto o = c.schrodinger2d;
        o.lambda = spectral.value_or(o.lambda);
        return models::make_schrodinger2d(o);
      }
      case ModelKind::Seismic2D:
      {
        auto o = c.seismic2d;
        o.frequency = spectral.value_or(o.frequency);
        return std::make_unique<models::Seismic2D>(o);
      }
    }
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::InvalidArgument)
    {
      config_error(e.what());
    }
    throw;
  }
  config_error("unknown model");
}

RealVector resolve_theta(const config::ThetaSpec &spec, const ExperimentConfig &c, std::uint64_t seed)
{
  if (spec.empty())
  {
    config_error("a coefficient vector (truth or initial) is required");
  }
  if (spec.profile == "random")
  {
    if (c.kind != ModelKind::Schrodinger2D)
    {
      config_error("profile 'random' applies to schrodinger2d only");
    }
    return models::schrodinger_random_coefficients(c.schrodinger2d, seed);
  }
  if (!spec.profile.empty())
  {
    if (c.kind != ModelKind::Seismic2D)
    {
      config_error("profile '" + spec.profile + "' applies to seismic2d only");
    }
    return models::Seismic2D(c.seismic2d).sample(profile_velocity(c, spec.profile));
  }
  const RealVector theta = Eigen::Map<const RealVector>(spec.values.data(), static_cast<Index>(spec.values.size()));
  const auto model = build_model(c);
  if (theta.size() != model->num_params())
  {
    config_error("expected " + std::to_string(model->num_params()) + " coefficients, got " +
                 std::to_string(theta.size()));
  }
  return theta;
}

models::MeasurementSet synthesize(const ExperimentConfig &c, std::uint64_t seed)
{
  if (!c.spectral_grid.empty() && !has_spectral_parameter(c.kind))
  {
    config_error(models::to_string(c.kind) + " has no spectral parameter; leave spectral_grid empty");
  }
  models::MeasurementSet set;
  const auto values = spectral_values(c);
  if (c.kind == ModelKind::Helmholtz1D)
  {
    set = models::helmholtz1d_synthesize(c.helmholtz1d, resolve_theta(c.truth, c, seed), values);
  }
  else
  {
    if (has_spectral_parameter(c.kind))
    {
      set.spectral_grid = values;
    }
    for (double s : values)
    {
      set.data.push_back(has_spectral_parameter(c.kind) ? data_at(c, s, seed)
                                                        : build_model(c)->evaluate(resolve_theta(c.truth, c, seed),
                                                                                   false)
                                                            .predicted);
    }
  }
  models::add_noise(set, c.noise.level, seed, c.noise.real_only);
  return set;
}

ComplexMatrix observed_data(const ExperimentConfig &c, std::uint64_t seed)
{
  if (!c.data_file.empty())
  {
    return io::read_matrix_csv(c.data_file);
  }
  auto single = c;
  single.spectral_grid.clear();
  return synthesize(single, seed).data.front();
}

datadriven::DataGram estimate_data_gram(const ExperimentConfig &c, const ComplexMatrix &D, std::uint64_t seed,
                                        std::optional<double> step)
{
  const std::string rule = gram_rule(c);
  if (rule == "file")
  {
    datadriven::DataGram dg;
    dg.G = io::read_matrix_csv(c.data_gram.file);
    dg.provenance = "file " + c.data_gram.file;
    if (dg.G.rows() != D.rows() || dg.G.cols() != D.rows())
    {
      config_error("data Gram file has the wrong size");
    }
    return dg;
  }
  if (rule == "transpose")
  {
    return datadriven::elliptic_gram_from_data(D);
  }
  if (rule == "wave")
  {
    return datadriven::wave_gram_from_data(D);
  }
  if (!c.data_file.empty())
  {
    config_error("the " + rule + " rule needs data at neighbouring spectral values; use synthesized data");
  }
  const double h = step.value_or(c.data_gram.step);
  const double s = default_spectral_value(c);
  auto shifted = c;
  shifted.spectral_grid = {s - h, s, s + h};
  if (rule == "helmholtz")
  {
    if (c.kind != ModelKind::Helmholtz1D)
    {
      config_error("the helmholtz rule applies to helmholtz1d only");
    }
    const auto set = synthesize(shifted, seed);
    return datadriven::helmholtz_gram_from_data(set.data[0], set.data[1], set.data[2], set.boundary_traces[0],
                                                set.boundary_traces[1], set.boundary_traces[2], s, h,
                                                boundary_speed(c, resolve_theta(c.truth, c, seed)));
  }
  if (c.kind != ModelKind::Schrodinger2D)
  {
    config_error("the schrodinger rule applies to schrodinger2d only");
  }
  const auto set = synthesize(shifted, seed);
  return datadriven::schrodinger_gram_from_data(set.data[0], set.data[1], set.data[2], s, h);
}

std::vector<std::filesystem::path> run(Command command, const ExperimentConfig &config, const RunOptions &options)
{
  std::filesystem::create_directories(options.out);
  switch (command)
  {
    case Command::Synthesize: return cmd_synthesize(config, options);
    case Command::Landscape: return cmd_landscape(config, options);
    case Command::Invert: return cmd_invert(config, options);
    case Command::Direct: return cmd_direct(config, options);
    case Command::Gramcheck: return cmd_gramcheck(config, options);
  }
  return {};
}

}  // namespace pdeinv::experiment
