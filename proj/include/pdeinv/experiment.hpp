// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_EXPERIMENT_HPP
#define PDEINV_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "pdeinv/config.hpp"
#include "pdeinv/datadriven.hpp"

// The commands behind the command-line runner. Each one is deterministic in
// (config, seed) and writes its artifacts atomically into `out`.
namespace pdeinv::experiment
{

enum class Command
{
  Synthesize,
  Landscape,
  Invert,
  Direct,
  Gramcheck,
};

Command parse_command(const std::string &text);

struct RunOptions
{
  std::filesystem::path out;
  std::uint64_t seed = 0;
  int threads = 1;
};

// The configured model, optionally at another spectral value (k, λ or frequency).
std::unique_ptr<ForwardModel> build_model(const config::ExperimentConfig &config,
                                          std::optional<double> spectral = std::nullopt);
double default_spectral_value(const config::ExperimentConfig &config);

RealVector resolve_theta(const config::ThetaSpec &spec, const config::ExperimentConfig &config,
                         std::uint64_t seed);

// Noise-free or noisy measurements of the truth over the spectral grid (or the
// model's own value when the grid is empty).
models::MeasurementSet synthesize(const config::ExperimentConfig &config, std::uint64_t seed);

// Data at the model's own spectral value: the configured file, else synthesized.
ComplexMatrix observed_data(const config::ExperimentConfig &config, std::uint64_t seed);

datadriven::DataGram estimate_data_gram(const config::ExperimentConfig &config, const ComplexMatrix &D,
                                        std::uint64_t seed, std::optional<double> step = std::nullopt);

std::vector<std::filesystem::path> run(Command command, const config::ExperimentConfig &config,
                                       const RunOptions &options);

}  // namespace pdeinv::experiment

#endif  // PDEINV_EXPERIMENT_HPP
