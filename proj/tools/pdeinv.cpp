// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

// pdeinv <synthesize|landscape|invert|direct|gramcheck> --config <path>
//        [--out <dir>] [--seed <u64>] [--threads <n>]
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 invariant violated at run time.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "pdeinv/experiment.hpp"
#include "pdeinv/io.hpp"

namespace
{

constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;
constexpr int kInvariantViolation = 4;

int exit_code(pdeinv::ErrorKind kind)
{
  using pdeinv::ErrorKind;
  switch (kind)
  {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch: return kConfigError;
    case ErrorKind::InvariantViolation:
    case ErrorKind::AsymmetricData: return kInvariantViolation;
    default: return kNumericFailure;
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Relaxed PDE-constrained inversion experiments"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("command", command, "synthesize | landscape | invert | direct | gramcheck")
    ->required()
    ->check(CLI::IsMember({"synthesize", "landscape", "invert", "direct", "gramcheck"}));
  app.add_option("--config", config_path, "experiment JSON")->required();
  auto *out_opt = app.add_option("--out", out_dir, "output directory (default: the config's output_dir)");
  auto *seed_opt = app.add_option("--seed", seed, "RNG seed (default: the config's seed)");
  auto *threads_opt =
    app.add_option("--threads", threads, "worker threads (default: $PDEINV_THREADS, then the config)")
      ->check(CLI::PositiveNumber);
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try
  {
    const auto config = pdeinv::config::parse(pdeinv::io::read_file(config_path));
    pdeinv::experiment::RunOptions run;
    run.out = *out_opt ? out_dir : config.output_dir;
    run.seed = *seed_opt ? seed : config.seed;
    run.threads = config.threads;
    if (*threads_opt)
    {
      run.threads = threads;
    }
    else if (const char *env = std::getenv("PDEINV_THREADS"))
    {
      const int n = std::atoi(env);
      if (n < 1)
      {
        std::cerr << "error: PDEINV_THREADS must be a positive integer\n";
        return kConfigError;
      }
      run.threads = n;
    }
    const auto written = pdeinv::experiment::run(pdeinv::experiment::parse_command(command), config, run);
    for (const auto &path : written)
    {
      std::cout << path.string() << '\n';
    }
    return 0;
  }
  catch (const pdeinv::Error &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  catch (const std::filesystem::filesystem_error &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}
