// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

// Drives the command-line runner as a subprocess. PDEINV_CLI names the
// executable and PDEINV_CONFIGS the example configuration directory.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "pdeinv/io.hpp"

using namespace pdeinv;
namespace fs = std::filesystem;

namespace
{

std::string env(const char *name)
{
  const char *v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name << " is not set");
  return v;
}

fs::path fresh(const std::string &name)
{
  const auto dir = fs::temp_directory_path() / ("pdeinv_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string &args)
{
  const std::string cmd = env("PDEINV_CLI") + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path &dir, const std::string &json)
{
  const auto path = dir / "config.json";
  std::ofstream(path) << json;
  return path;
}

std::set<std::string> listing(const fs::path &dir)
{
  std::set<std::string> names;
  for (const auto &e : fs::directory_iterator(dir))
  {
    names.insert(e.path().filename().string());
  }
  return names;
}

}  // namespace

TEST_CASE("elliptic synthesize: symmetric 3x3 CSV, byte-identical on rerun")
{
  const auto dir = fresh("synth");
  const auto cfg = env("PDEINV_CONFIGS") + "/elliptic1d_synthesize.json";
  REQUIRE(run("synthesize --config " + cfg + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run("synthesize --config " + cfg + " --out " + (dir / "b").string()) == 0);
  CHECK(listing(dir / "a") == std::set<std::string>{"data_0.csv", "metadata.json"});
  for (const char *f : {"data_0.csv", "metadata.json"})
  {
    CHECK(io::read_file(dir / "a" / f) == io::read_file(dir / "b" / f));
  }
  const ComplexMatrix D = io::read_matrix_csv(dir / "a" / "data_0.csv");
  CHECK(D.rows() == 3);
  CHECK(D.cols() == 3);
  CHECK((D - D.transpose()).norm() <= 1e-14 * D.norm());
}

TEST_CASE("helmholtz synthesize over three wavenumbers writes three data and three trace files")
{
  const auto dir = fresh("helm");
  const auto cfg = write_config(dir, R"({"model": {"kind": "helmholtz1d", "k": 10.0},
                                        "truth": [1.0], "spectral_grid": [9.99, 10.0, 10.01]})");
  REQUIRE(run("synthesize --config " + cfg.string() + " --out " + (dir / "o").string()) == 0);
  CHECK(listing(dir / "o") == std::set<std::string>{"data_0.csv", "data_1.csv", "data_2.csv", "traces_0.csv",
                                                    "traces_1.csv", "traces_2.csv", "metadata.json"});
}

TEST_CASE("landscape: single grid point gives one row; thread count does not change the bytes")
{
  const auto dir = fresh("land");
  const auto single = write_config(dir, R"({"model": {"kind": "elliptic1d"}, "truth": [1.0, 0.0, 0.0],
                                           "landscape": {"param": 0, "min": 1.0, "max": 1.0, "points": 1},
                                           "objectives": [{"rho": "inf", "metric": "conventional"}]})");
  REQUIRE(run("landscape --config " + single.string() + " --out " + (dir / "s").string()) == 0);
  CHECK(io::read_file(dir / "s" / "curves.csv") == "theta,rho,mode,J\n1,inf,conventional,0\n");

  const auto cfg = env("PDEINV_CONFIGS") + "/poisson2d_landscape.json";
  REQUIRE(run("landscape --config " + cfg + " --threads 1 --out " + (dir / "t1").string()) == 0);
  REQUIRE(run("landscape --config " + cfg + " --threads 3 --out " + (dir / "t3").string()) == 0);
  CHECK(io::read_file(dir / "t1" / "curves.csv") == io::read_file(dir / "t3" / "curves.csv"));
  CHECK(io::read_file(dir / "t1" / "landscape.json").find("\"argmin_theta\": 0.0") != std::string::npos);
}

TEST_CASE("invert from the truth stops at once and records the default rho")
{
  const auto dir = fresh("inv");
  const auto cfg = write_config(dir, R"({"model": {"kind": "elliptic1d"}, "truth": [1.0, 0.1, 0.0],
                                        "initial": [1.0, 0.1, 0.0]})");
  REQUIRE(run("invert --config " + cfg.string() + " --out " + (dir / "o").string()) == 0);
  const std::string report = io::read_file(dir / "o" / "report_0.json");
  CHECK(report.find("\"iterations\": 0") != std::string::npos);
  CHECK(report.find("\"rho\": \"1\"") != std::string::npos);
  CHECK(report.find("\"metric\": \"variable\"") != std::string::npos);
}

TEST_CASE("direct command recovers the coefficients of inverse-crime data")
{
  const auto dir = fresh("direct");
  REQUIRE(run("direct --config " + env("PDEINV_CONFIGS") + "/schrodinger2d_direct.json --out " +
              (dir / "o").string()) == 0);
  const auto text = io::read_file(dir / "o" / "coefficients.csv");
  CHECK(text.rfind("k,theta\n", 0) == 0);
  const std::string json = io::read_file(dir / "o" / "direct.json");
  const auto pos = json.find("\"max_error\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(json.substr(pos + 13)) <= 1e-8);
}

TEST_CASE("exit codes")
{
  const auto dir = fresh("codes");
  const auto unknown = write_config(dir, R"({"model": {"kind": "elliptic1d", "colour": 1}})");
  CHECK(run("synthesize --config " + unknown.string() + " --out " + (dir / "o").string()) == 2);
  CHECK(run("synthesize --config " + (dir / "missing.json").string()) == 2);
  CHECK(run("explode --config " + unknown.string()) == 2);

  fs::create_directories(dir / "q");
  const auto rank = write_config(dir / "q", R"({"model": {"kind": "schrodinger2d", "mesh": 12, "num_sources": 6,
                                              "num_modes": 3, "source_width": 10.0},
                                              "truth": [0.5, 0.5, 0.5], "direct": {"num_rows": 2}})");
  CHECK(run("direct --config " + rank.string() + " --out " + (dir / "o").string()) == 3);

  // a data file that breaks reciprocity violates the transpose-rule invariant
  ComplexMatrix D = ComplexMatrix::Identity(3, 3);
  D(0, 2) = 0.5;
  io::write_atomic(dir / "skew.csv", io::matrix_csv(D));
  fs::create_directories(dir / "s");
  const auto skew = write_config(dir / "s", R"({"model": {"kind": "elliptic1d",
                                              "sources": [0.25, 0.5, 0.75]}, "truth": [1.0, 0.0, 0.0],
                                              "objectives": [{"rho": 1.0, "metric": "data_driven"}],
                                              "landscape": {"min": 0.9, "max": 1.1, "points": 3},
                                              "data_file": ")" + (dir / "skew.csv").string() + "\"}");
  CHECK(run("landscape --config " + skew.string() + " --out " + (dir / "o").string()) == 4);
}
