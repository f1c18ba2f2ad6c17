// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_IO_HPP
#define PDEINV_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pdeinv/inversion.hpp"
#include "pdeinv/models/common.hpp"

// CSV and JSON artifacts. Numbers are printed with 17 significant digits so
// every double survives a write/read cycle unchanged.
namespace pdeinv::io
{

std::string format_number(double x);
double parse_number(const std::string &text);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path &path, const std::string &content);
std::string read_file(const std::filesystem::path &path);

// Header `i,j,re,im`, one row per entry, row-major.
std::string matrix_csv(const ComplexMatrix &X);
ComplexMatrix parse_matrix_csv(const std::string &text);
ComplexMatrix read_matrix_csv(const std::filesystem::path &path);

// Header `theta,rho,mode,J`, grid-major, one row per (grid point, curve).
std::string curves_csv(const inversion::LandscapeScan &scan);

// Header `nx,ny,dx,dy`, the four values, then ny rows of nx values.
std::string grid_csv(const models::CoefficientGrid &grid);
models::CoefficientGrid parse_grid_csv(const std::string &text);

// Header `k,theta`.
std::string vector_csv(const RealVector &theta);

std::string report_json(const inversion::InversionReport &report, const objective::ObjectiveConfig &config);

}  // namespace pdeinv::io

#endif  // PDEINV_IO_HPP
