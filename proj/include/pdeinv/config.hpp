// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_CONFIG_HPP
#define PDEINV_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pdeinv/inversion.hpp"
#include "pdeinv/models/elliptic1d.hpp"
#include "pdeinv/models/helmholtz1d.hpp"
#include "pdeinv/models/poisson2d.hpp"
#include "pdeinv/models/schrodinger2d.hpp"
#include "pdeinv/models/seismic2d.hpp"
#include "pdeinv/objective.hpp"

// Experiment description read from a JSON file. Unknown keys and mistyped
// values raise ConfigError. Omitted keys keep the defaults below.
namespace pdeinv::config
{

// Either explicit values or a named profile: "layered" or "linear" for the
// seismic model, "random" (seeded) for the Schrödinger model.
struct ThetaSpec
{
  std::vector<double> values;
  std::string profile;

  bool empty() const { return values.empty() && profile.empty(); }
};

struct ObjectiveSpec
{
  objective::Rho rho = objective::Rho::finite(1.0);
  objective::MetricMode metric = objective::MetricMode::Variable;
};

struct LandscapeSettings
{
  Index param = 0;
  double min = 0.0;
  double max = 1.0;
  int points = 201;
};

// How the data-driven Gram is obtained. "auto" picks the model's own rule:
// transpose for elliptic1d/poisson2d, the k-derivative rule for helmholtz1d,
// the λ-derivative rule for schrodinger2d and the wave rule for seismic2d.
// "file" loads a matrix CSV.
struct GramSettings
{
  std::string rule = "auto";
  double step = 1e-3;                 // spectral step of the derivative rules
  std::string file;
  std::vector<double> check_steps = {1e-2, 5e-3, 2.5e-3, 1.25e-3};  // gramcheck sweep
};

struct NoiseSettings
{
  double level = 0.0;
  bool real_only = false;
};

struct ExperimentConfig
{
  models::ModelKind kind = models::ModelKind::Elliptic1D;
  models::Elliptic1DOptions elliptic1d;
  models::Poisson2DOptions poisson2d;
  models::Helmholtz1DOptions helmholtz1d;
  models::Schrodinger2DOptions schrodinger2d;
  models::Seismic2DOptions seismic2d;

  ThetaSpec truth;
  ThetaSpec initial;
  // k for helmholtz1d, λ for schrodinger2d, the frequency for seismic2d.
  // Empty means the model's own value.
  std::vector<double> spectral_grid;
  std::vector<ObjectiveSpec> objectives = {ObjectiveSpec{}};
  inversion::LbfgsOptions optimizer;
  inversion::DirectOptions direct;
  LandscapeSettings landscape;
  GramSettings data_gram;
  NoiseSettings noise;
  std::string data_file;  // matrix CSV used instead of synthesized data
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int threads = 1;
};

ExperimentConfig parse(const std::string &json_text);
std::string serialize(const ExperimentConfig &config);

}  // namespace pdeinv::config

#endif  // PDEINV_CONFIG_HPP
