// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/config.hpp"

#include <set>

#include "json.hpp"

namespace pdeinv::config
{

namespace
{

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string &what)
{
  throw Error(ErrorKind::ConfigError, what);
}

std::vector<double> to_vector(const RealVector &v)
{
  return {v.data(), v.data() + v.size()};
}

RealVector to_eigen(const std::vector<double> &v)
{
  return Eigen::Map<const RealVector>(v.data(), static_cast<Index>(v.size()));
}

template <class Enum>
struct Names
{
  std::vector<std::pair<Enum, const char *>> table;

  Enum parse(const std::string &text, const std::string &where) const
  {
    for (const auto &[value, name] : table)
    {
      if (text == name)
      {
        return value;
      }
    }
    fail(where + ": unknown value '" + text + "'");
  }
  std::string name(Enum value) const
  {
    for (const auto &[v, name] : table)
    {
      if (v == value)
      {
        return name;
      }
    }
    return "unknown";
  }
};

const Names<galerkin::InnerProductMode> kInnerProduct{{
  {galerkin::InnerProductMode::CoefficientIndependent, "coefficient_independent"},
  {galerkin::InnerProductMode::CoefficientDependent, "coefficient_dependent"},
}};
const Names<galerkin::BasisMode> kBasis{{
  {galerkin::BasisMode::FullFem, "full_fem"},
  {galerkin::BasisMode::SpanOfSources, "span_of_sources"},
}};
const Names<models::Elliptic1DOptions::Discretization> kEllipticDisc{{
  {models::Elliptic1DOptions::Discretization::Analytic, "analytic"},
  {models::Elliptic1DOptions::Discretization::Fem, "fem"},
}};
const Names<models::Helmholtz1DOptions::Discretization> kHelmholtzDisc{{
  {models::Helmholtz1DOptions::Discretization::Analytic, "analytic"},
  {models::Helmholtz1DOptions::Discretization::Fem, "fem"},
}};

// An object whose keys must all be consumed.
class Section
{
public:
  Section(const Json &j, std::string name) : j_(j), name_(std::move(name))
  {
    if (!j_.is_object())
    {
      fail(name_ + ": expected an object");
    }
  }

  const Json *find(const char *key)
  {
    const auto it = j_.find(key);
    if (it == j_.end())
    {
      return nullptr;
    }
    used_.insert(key);
    return &*it;
  }

  std::string where(const char *key) const { return name_ + "." + key; }

  void read(const char *key, double &out)
  {
    if (const Json *v = find(key))
    {
      if (!v->is_number())
      {
        fail(where(key) + ": expected a number");
      }
      out = v->get<double>();
    }
  }
  void read(const char *key, bool &out)
  {
    if (const Json *v = find(key))
    {
      if (!v->is_boolean())
      {
        fail(where(key) + ": expected true or false");
      }
      out = v->get<bool>();
    }
  }
  void read(const char *key, std::string &out)
  {
    if (const Json *v = find(key))
    {
      if (!v->is_string())
      {
        fail(where(key) + ": expected a string");
      }
      out = v->get<std::string>();
    }
  }
  template <class Int>
    requires std::is_integral_v<Int>
  void read(const char *key, Int &out)
  {
    if (const Json *v = find(key))
    {
      if (!v->is_number_integer() || (std::is_unsigned_v<Int> && v->is_number_integer() && !v->is_number_unsigned()))
      {
        fail(where(key) + ": expected an integer");
      }
      out = v->get<Int>();
    }
  }
  void read(const char *key, std::vector<double> &out)
  {
    if (const Json *v = find(key))
    {
      if (!v->is_array())
      {
        fail(where(key) + ": expected an array of numbers");
      }
      out.clear();
      for (const auto &x : *v)
      {
        if (!x.is_number())
        {
          fail(where(key) + ": expected an array of numbers");
        }
        out.push_back(x.get<double>());
      }
    }
  }
  void read(const char *key, RealVector &out)
  {
    if (find_peek(key))
    {
      std::vector<double> v;
      read(key, v);
      out = to_eigen(v);
    }
  }
  template <class Enum>
  void read(const char *key, Enum &out, const Names<Enum> &names)
  {
    std::string text;
    if (find_peek(key))
    {
      read(key, text);
      out = names.parse(text, where(key));
    }
  }

  void finish() const
  {
    for (const auto &item : j_.items())
    {
      if (!used_.count(item.key()))
      {
        fail(name_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

private:
  bool find_peek(const char *key) const { return j_.contains(key); }

  const Json &j_;
  std::string name_;
  std::set<std::string> used_;
};

objective::Rho parse_rho(const Json &v, const std::string &where)
{
  try
  {
    if (v.is_number())
    {
      const double x = v.get<double>();
      return x == 0.0 ? objective::Rho::zero_limit() : objective::Rho::finite(x);
    }
    if (v.is_string())
    {
      return objective::Rho::parse(v.get<std::string>());
    }
  }
  catch (const Error &e)
  {
    fail(where + ": " + e.what());
  }
  fail(where + ": expected a positive number, \"inf\" or \"0\"");
}

Json rho_json(const objective::Rho &rho)
{
  if (rho.kind() == objective::Rho::Kind::Finite)
  {
    return rho.value();
  }
  return rho.to_string();
}

ThetaSpec parse_theta(const Json &v, const std::string &where)
{
  ThetaSpec spec;
  if (v.is_string())
  {
    spec.profile = v.get<std::string>();
    if (spec.profile != "layered" && spec.profile != "linear" && spec.profile != "random")
    {
      fail(where + ": unknown profile '" + spec.profile + "'");
    }
    return spec;
  }
  if (!v.is_array())
  {
    fail(where + ": expected an array of numbers or a profile name");
  }
  for (const auto &x : v)
  {
    if (!x.is_number())
    {
      fail(where + ": expected an array of numbers");
    }
    spec.values.push_back(x.get<double>());
  }
  return spec;
}

Json theta_json(const ThetaSpec &spec)
{
  if (!spec.profile.empty())
  {
    return spec.profile;
  }
  return spec.values;
}

void read_model(const Json &j, ExperimentConfig &c)
{
  Section s(j, "model");
  std::string kind;
  s.read("kind", kind);
  if (kind.empty())
  {
    fail("model.kind is required");
  }
  try
  {
    c.kind = models::parse_model_kind(kind);
  }
  catch (const Error &)
  {
    fail("model.kind: unknown model '" + kind + "'");
  }
  switch (c.kind)
  {
    case models::ModelKind::Elliptic1D:
    {
      auto &o = c.elliptic1d;
      s.read("sources", o.sources);
      s.read("num_params", o.num_params);
      s.read("lower", o.lower);
      s.read("upper", o.upper);
      s.read("min_coefficient", o.min_coefficient);
      s.read("discretization", o.discretization, kEllipticDisc);
      s.read("cells", o.cells);
      s.read("inner_product", o.inner_product, kInnerProduct);
      break;
    }
    case models::ModelKind::Poisson2D:
    {
      auto &o = c.poisson2d;
      s.read("mesh", o.mesh);
      s.read("num_sources", o.num_sources);
      s.read("source_width", o.source_width);
      s.read("ring_margin", o.ring_margin);
      s.read("basis", o.basis, kBasis);
      s.read("inner_product", o.inner_product, kInnerProduct);
      s.read("theta_min", o.theta_min);
      s.read("theta_max", o.theta_max);
      break;
    }
    case models::ModelKind::Helmholtz1D:
    {
      auto &o = c.helmholtz1d;
      s.read("k", o.k);
      s.read("sources", o.sources);
      s.read("discretization", o.discretization, kHelmholtzDisc);
      s.read("num_params", o.num_params);
      s.read("lower", o.lower);
      s.read("upper", o.upper);
      s.read("min_coefficient", o.min_coefficient);
      s.read("cells", o.cells);
      break;
    }
    case models::ModelKind::Schrodinger2D:
    {
      auto &o = c.schrodinger2d;
      s.read("mesh", o.mesh);
      s.read("num_sources", o.num_sources);
      s.read("source_width", o.source_width);
      s.read("ring_margin", o.ring_margin);
      s.read("ring_phase", o.ring_phase);
      s.read("lambda", o.lambda);
      s.read("num_modes", o.num_modes);
      s.read("coeff_min", o.coeff_min);
      s.read("coeff_max", o.coeff_max);
      s.read("basis", o.basis, kBasis);
      s.read("inner_product", o.inner_product, kInnerProduct);
      break;
    }
    case models::ModelKind::Seismic2D:
    {
      auto &o = c.seismic2d;
      s.read("width", o.width);
      s.read("depth", o.depth);
      s.read("spacing", o.spacing);
      s.read("pml_cells", o.pml_cells);
      s.read("pml_reflection", o.pml_reflection);
      s.read("pml_velocity", o.pml_velocity);
      s.read("absorbing_top", o.absorbing_top);
      s.read("frequency", o.frequency);
      s.read("num_sources", o.num_sources);
      s.read("source_depth", o.source_depth);
      s.read("source_x_min", o.source_x_min);
      s.read("source_x_max", o.source_x_max);
      s.read("source_sigma", o.source_sigma);
      s.read("cell_weighted_pairing", o.cell_weighted_pairing);
      s.read("param_nx", o.param_nx);
      s.read("param_nz", o.param_nz);
      s.read("velocity_min", o.velocity_min);
      s.read("velocity_max", o.velocity_max);
      break;
    }
  }
  s.finish();
}

Json model_json(const ExperimentConfig &c)
{
  Json j;
  j["kind"] = models::to_string(c.kind);
  switch (c.kind)
  {
    case models::ModelKind::Elliptic1D:
    {
      const auto &o = c.elliptic1d;
      j["sources"] = o.sources;
      j["num_params"] = o.num_params;
      j["lower"] = to_vector(o.lower);
      j["upper"] = to_vector(o.upper);
      j["min_coefficient"] = o.min_coefficient;
      j["discretization"] = kEllipticDisc.name(o.discretization);
      j["cells"] = o.cells;
      j["inner_product"] = kInnerProduct.name(o.inner_product);
      break;
    }
    case models::ModelKind::Poisson2D:
    {
      const auto &o = c.poisson2d;
      j["mesh"] = o.mesh;
      j["num_sources"] = o.num_sources;
      j["source_width"] = o.source_width;
      j["ring_margin"] = o.ring_margin;
      j["basis"] = kBasis.name(o.basis);
      j["inner_product"] = kInnerProduct.name(o.inner_product);
      j["theta_min"] = o.theta_min;
      j["theta_max"] = o.theta_max;
      break;
    }
    case models::ModelKind::Helmholtz1D:
    {
      const auto &o = c.helmholtz1d;
      j["k"] = o.k;
      j["sources"] = o.sources;
      j["discretization"] = kHelmholtzDisc.name(o.discretization);
      j["num_params"] = o.num_params;
      j["lower"] = to_vector(o.lower);
      j["upper"] = to_vector(o.upper);
      j["min_coefficient"] = o.min_coefficient;
      j["cells"] = o.cells;
      break;
    }
    case models::ModelKind::Schrodinger2D:
    {
      const auto &o = c.schrodinger2d;
      j["mesh"] = o.mesh;
      j["num_sources"] = o.num_sources;
      j["source_width"] = o.source_width;
      j["ring_margin"] = o.ring_margin;
      j["ring_phase"] = o.ring_phase;
      j["lambda"] = o.lambda;
      j["num_modes"] = o.num_modes;
      j["coeff_min"] = o.coeff_min;
      j["coeff_max"] = o.coeff_max;
      j["basis"] = kBasis.name(o.basis);
      j["inner_product"] = kInnerProduct.name(o.inner_product);
      break;
    }
    case models::ModelKind::Seismic2D:
    {
      const auto &o = c.seismic2d;
      j["width"] = o.width;
      j["depth"] = o.depth;
      j["spacing"] = o.spacing;
      j["pml_cells"] = o.pml_cells;
      j["pml_reflection"] = o.pml_reflection;
      j["pml_velocity"] = o.pml_velocity;
      j["absorbing_top"] = o.absorbing_top;
      j["frequency"] = o.frequency;
      j["num_sources"] = o.num_sources;
      j["source_depth"] = o.source_depth;
      j["source_x_min"] = o.source_x_min;
      j["source_x_max"] = o.source_x_max;
      j["source_sigma"] = o.source_sigma;
      j["cell_weighted_pairing"] = o.cell_weighted_pairing;
      j["param_nx"] = o.param_nx;
      j["param_nz"] = o.param_nz;
      j["velocity_min"] = o.velocity_min;
      j["velocity_max"] = o.velocity_max;
      break;
    }
  }
  return j;
}

}  // namespace

ExperimentConfig parse(const std::string &json_text)
{
  Json root;
  try
  {
    root = Json::parse(json_text);
  }
  catch (const nlohmann::json::exception &e)
  {
    fail(std::string("malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section s(root, "config");
  const Json *model = s.find("model");
  if (!model)
  {
    fail("config.model is required");
  }
  read_model(*model, c);

  if (const Json *v = s.find("truth"))
  {
    c.truth = parse_theta(*v, "config.truth");
  }
  if (const Json *v = s.find("initial"))
  {
    c.initial = parse_theta(*v, "config.initial");
  }
  s.read("spectral_grid", c.spectral_grid);
  if (const Json *v = s.find("objectives"))
  {
    if (!v->is_array() || v->empty())
    {
      fail("config.objectives: expected a non-empty array");
    }
    c.objectives.clear();
    for (std::size_t i = 0; i < v->size(); ++i)
    {
      const std::string where = "config.objectives[" + std::to_string(i) + "]";
      Section o((*v)[i], where);
      ObjectiveSpec spec;
      if (const Json *r = o.find("rho"))
      {
        spec.rho = parse_rho(*r, where + ".rho");
      }
      std::string metric;
      o.read("metric", metric);
      if (!metric.empty())
      {
        try
        {
          spec.metric = objective::parse_metric_mode(metric);
        }
        catch (const Error &)
        {
          fail(where + ".metric: unknown value '" + metric + "'");
        }
      }
      o.finish();
      c.objectives.push_back(spec);
    }
  }
  if (const Json *v = s.find("optimizer"))
  {
    Section o(*v, "config.optimizer");
    o.read("memory", c.optimizer.memory);
    o.read("max_iterations", c.optimizer.max_iterations);
    o.read("c1", c.optimizer.c1);
    o.read("c2", c.optimizer.c2);
    o.read("gradient_tol", c.optimizer.gradient_tol);
    o.read("max_line_search", c.optimizer.max_line_search);
    o.finish();
  }
  if (const Json *v = s.find("direct"))
  {
    Section o(*v, "config.direct");
    o.read("full_least_squares", c.direct.full_least_squares);
    o.read("column", c.direct.column);
    o.read("num_rows", c.direct.num_rows);
    o.finish();
  }
  if (const Json *v = s.find("landscape"))
  {
    Section o(*v, "config.landscape");
    o.read("param", c.landscape.param);
    o.read("min", c.landscape.min);
    o.read("max", c.landscape.max);
    o.read("points", c.landscape.points);
    o.finish();
  }
  if (const Json *v = s.find("data_gram"))
  {
    Section o(*v, "config.data_gram");
    o.read("rule", c.data_gram.rule);
    o.read("step", c.data_gram.step);
    o.read("file", c.data_gram.file);
    o.read("check_steps", c.data_gram.check_steps);
    o.finish();
    static const std::set<std::string> rules = {"auto", "transpose", "helmholtz", "schrodinger", "wave", "file"};
    if (!rules.count(c.data_gram.rule))
    {
      fail("config.data_gram.rule: unknown value '" + c.data_gram.rule + "'");
    }
  }
  if (const Json *v = s.find("noise"))
  {
    Section o(*v, "config.noise");
    o.read("level", c.noise.level);
    o.read("real_only", c.noise.real_only);
    o.finish();
  }
  s.read("data_file", c.data_file);
  s.read("seed", c.seed);
  s.read("output_dir", c.output_dir);
  s.read("threads", c.threads);
  s.finish();

  if (c.landscape.points < 1)
  {
    fail("config.landscape.points must be at least 1");
  }
  if (c.threads < 1)
  {
    fail("config.threads must be at least 1");
  }
  if (c.noise.level < 0.0)
  {
    fail("config.noise.level must be non-negative");
  }
  return c;
}

std::string serialize(const ExperimentConfig &c)
{
  Json root;
  root["model"] = model_json(c);
  root["truth"] = theta_json(c.truth);
  root["initial"] = theta_json(c.initial);
  root["spectral_grid"] = c.spectral_grid;
  Json objectives = Json::array();
  for (const auto &o : c.objectives)
  {
    objectives.push_back({{"rho", rho_json(o.rho)}, {"metric", objective::to_string(o.metric)}});
  }
  root["objectives"] = objectives;
  root["optimizer"] = {{"memory", c.optimizer.memory},
                       {"max_iterations", c.optimizer.max_iterations},
                       {"c1", c.optimizer.c1},
                       {"c2", c.optimizer.c2},
                       {"gradient_tol", c.optimizer.gradient_tol},
                       {"max_line_search", c.optimizer.max_line_search}};
  root["direct"] = {{"full_least_squares", c.direct.full_least_squares},
                    {"column", c.direct.column},
                    {"num_rows", c.direct.num_rows}};
  root["landscape"] = {{"param", c.landscape.param},
                       {"min", c.landscape.min},
                       {"max", c.landscape.max},
                       {"points", c.landscape.points}};
  root["data_gram"] = {{"rule", c.data_gram.rule},
                       {"step", c.data_gram.step},
                       {"file", c.data_gram.file},
                       {"check_steps", c.data_gram.check_steps}};
  root["noise"] = {{"level", c.noise.level}, {"real_only", c.noise.real_only}};
  root["data_file"] = c.data_file;
  root["seed"] = c.seed;
  root["output_dir"] = c.output_dir;
  root["threads"] = c.threads;
  return root.dump(2) + "\n";
}

}  // namespace pdeinv::config
