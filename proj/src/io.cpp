// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/io.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pdeinv::io
{

namespace
{

std::vector<std::string> split(const std::string &line, char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep))
  {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == sep)
  {
    out.emplace_back();
  }
  return out;
}

std::vector<std::string> lines_of(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
  {
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    if (!line.empty())
    {
      out.push_back(line);
    }
  }
  return out;
}

long parse_index(const std::string &text)
{
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
  {
    throw Error(ErrorKind::ConfigError, "not an integer: '" + text + "'");
  }
  return v;
}

nlohmann::json number_or_null(double x)
{
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string &text)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
  {
    throw Error(ErrorKind::ConfigError, "not a number: '" + text + "'");
  }
  return v;
}

void write_atomic(const std::filesystem::path &path, const std::string &content)
{
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out)
    {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorKind::ConfigError, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string matrix_csv(const ComplexMatrix &X)
{
  std::string out = "i,j,re,im\n";
  for (Index i = 0; i < X.rows(); ++i)
  {
    for (Index j = 0; j < X.cols(); ++j)
    {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_number(X(i, j).real()) + ',' +
             format_number(X(i, j).imag()) + '\n';
    }
  }
  return out;
}

ComplexMatrix parse_matrix_csv(const std::string &text)
{
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "i,j,re,im")
  {
    throw Error(ErrorKind::ConfigError, "matrix CSV must start with the header i,j,re,im");
  }
  struct Entry
  {
    long i, j;
    Complex v;
  };
  std::vector<Entry> entries;
  long rows = 0, cols = 0;
  for (std::size_t l = 1; l < lines.size(); ++l)
  {
    const auto f = split(lines[l], ',');
    if (f.size() != 4)
    {
      throw Error(ErrorKind::ConfigError, "matrix CSV line " + std::to_string(l + 1) + ": expected 4 fields");
    }
    Entry e{parse_index(f[0]), parse_index(f[1]), Complex(parse_number(f[2]), parse_number(f[3]))};
    if (e.i < 0 || e.j < 0)
    {
      throw Error(ErrorKind::ConfigError, "negative matrix index");
    }
    rows = std::max(rows, e.i + 1);
    cols = std::max(cols, e.j + 1);
    entries.push_back(e);
  }
  if (static_cast<long>(entries.size()) != rows * cols)
  {
    throw Error(ErrorKind::ConfigError, "matrix CSV does not list every entry exactly once");
  }
  ComplexMatrix X = ComplexMatrix::Constant(rows, cols, Complex(std::nan(""), 0.0));
  for (const auto &e : entries)
  {
    if (!std::isnan(X(e.i, e.j).real()))
    {
      throw Error(ErrorKind::ConfigError, "duplicate matrix entry");
    }
    X(e.i, e.j) = e.v;
  }
  return X;
}

ComplexMatrix read_matrix_csv(const std::filesystem::path &path)
{
  return parse_matrix_csv(read_file(path));
}

std::string curves_csv(const inversion::LandscapeScan &scan)
{
  std::string out = "theta,rho,mode,J\n";
  for (std::size_t g = 0; g < scan.theta_grid.size(); ++g)
  {
    for (const auto &curve : scan.curves)
    {
      out += format_number(scan.theta_grid[g]) + ',' + curve.rho.to_string() + ',' +
             objective::to_string(curve.metric) + ',' + format_number(curve.J[g]) + '\n';
    }
  }
  return out;
}

std::string grid_csv(const models::CoefficientGrid &grid)
{
  std::string out = "nx,ny,dx,dy\n";
  out += std::to_string(grid.nx) + ',' + std::to_string(grid.ny) + ',' + format_number(grid.dx) + ',' +
         format_number(grid.dy) + '\n';
  for (int j = 0; j < grid.ny; ++j)
  {
    for (int i = 0; i < grid.nx; ++i)
    {
      out += format_number(grid.values(static_cast<Index>(j) * grid.nx + i));
      out += i + 1 < grid.nx ? ',' : '\n';
    }
  }
  return out;
}

models::CoefficientGrid parse_grid_csv(const std::string &text)
{
  const auto lines = lines_of(text);
  if (lines.size() < 2 || lines[0] != "nx,ny,dx,dy")
  {
    throw Error(ErrorKind::ConfigError, "grid CSV must start with the header nx,ny,dx,dy");
  }
  const auto h = split(lines[1], ',');
  if (h.size() != 4)
  {
    throw Error(ErrorKind::ConfigError, "grid CSV: malformed size line");
  }
  models::CoefficientGrid grid;
  grid.nx = static_cast<int>(parse_index(h[0]));
  grid.ny = static_cast<int>(parse_index(h[1]));
  grid.dx = parse_number(h[2]);
  grid.dy = parse_number(h[3]);
  if (grid.nx < 1 || grid.ny < 1 || static_cast<int>(lines.size()) != grid.ny + 2)
  {
    throw Error(ErrorKind::ConfigError, "grid CSV: row count does not match ny");
  }
  grid.values.resize(static_cast<Index>(grid.nx) * grid.ny);
  for (int j = 0; j < grid.ny; ++j)
  {
    const auto f = split(lines[static_cast<std::size_t>(j) + 2], ',');
    if (static_cast<int>(f.size()) != grid.nx)
    {
      throw Error(ErrorKind::ConfigError, "grid CSV: row " + std::to_string(j) + " does not have nx values");
    }
    for (int i = 0; i < grid.nx; ++i)
    {
      grid.values(static_cast<Index>(j) * grid.nx + i) = parse_number(f[static_cast<std::size_t>(i)]);
    }
  }
  return grid;
}

std::string vector_csv(const RealVector &theta)
{
  std::string out = "k,theta\n";
  for (Index k = 0; k < theta.size(); ++k)
  {
    out += std::to_string(k) + ',' + format_number(theta(k)) + '\n';
  }
  return out;
}

std::string report_json(const inversion::InversionReport &report, const objective::ObjectiveConfig &config)
{
  nlohmann::ordered_json j;
  j["metric"] = objective::to_string(config.metric);
  j["rho"] = config.rho.to_string();
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["evaluations"] = report.evaluations;
  j["message"] = report.message;
  j["final_objective"] = number_or_null(report.final_objective);
  j["data_fit"] = number_or_null(report.data_fit);
  j["final_theta"] = std::vector<double>(report.final_theta.data(),
                                         report.final_theta.data() + report.final_theta.size());
  j["objective_history"] = report.objective_history;
  return j.dump(2) + "\n";
}

}  // namespace pdeinv::io
