// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_INVERSION_HPP
#define PDEINV_INVERSION_HPP

#include <functional>
#include <string>
#include <vector>

#include "pdeinv/forward_model.hpp"
#include "pdeinv/galerkin.hpp"
#include "pdeinv/objective.hpp"

namespace pdeinv::inversion
{

struct LbfgsOptions
{
  int memory = 10;
  int max_iterations = 500;
  double c1 = 1e-4;
  double c2 = 0.9;
  double gradient_tol = 1e-8;  // stop when ‖∇J‖ ≤ tol·(1 + |J|)
  int max_line_search = 30;
};

struct InversionReport
{
  std::vector<RealVector> theta_history;  // accepted iterates, starting point first
  std::vector<double> objective_history;
  RealVector final_theta;
  double final_objective = 0.0;
  double data_fit = 0.0;  // ‖E‖_F / ‖D‖_F at final_theta
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::string message;
};

// Value and gradient at θ.
using ObjectiveFunction = std::function<double(const RealVector &theta, RealVector &gradient)>;

// Projected L-BFGS with a strong Wolfe line search along the projected path
// θ(α) = Π(θ + αd). Stationarity is measured with the projected gradient, which
// is ∇J in the interior of the box. A failed line search ends the run with
// converged = false and the best iterate so far.
InversionReport lbfgs_minimize(const ObjectiveFunction &f, const RealVector &initial,
                               const ParamBounds &bounds, const LbfgsOptions &options = {});

// The configured objective of a forward model against data D.
InversionReport lbfgs_minimize(const ForwardModel &model, const RealVector &initial, const ComplexMatrix &D,
                               const objective::ObjectiveConfig &config, const LbfgsOptions &options = {});

struct DirectOptions
{
  // Least squares over all n² equations instead of the subset below.
  bool full_least_squares = false;
  Index column = 0;      // j of the default subset
  Index num_rows = -1;   // i = 0..num_rows−1; defaults to the number of coefficients
};

struct DirectResult
{
  RealVector coefficients;
  Index rank = 0;
  double residual = 0.0;  // ‖Hc − b‖ / ‖b‖ on the selected equations
};

// Solves Σ_k h_ijk c_k = −m_ij + λ s_ij + (M D⁻¹ M)_ij for real c over the
// selected (i, j). SingularData when D is numerically singular, RankDeficient
// when the selected equations do not determine every c_k.
DirectResult direct_method(const ComplexMatrix &D, const galerkin::AssembledSystem &sys, double lambda,
                           const DirectOptions &options = {});

struct LandscapeCurve
{
  objective::Rho rho = objective::Rho::infinity();
  objective::MetricMode metric = objective::MetricMode::Conventional;
  std::vector<double> J;
};

struct LandscapeScan
{
  std::vector<double> theta_grid;
  std::vector<LandscapeCurve> curves;
};

// Evaluates every configured objective along θ_param ∈ grid with the other
// parameters held at `base`. Grid points are split across `threads` workers;
// the output does not depend on the thread count.
LandscapeScan landscape_scan(const ForwardModel &model, const RealVector &base, Index param,
                             const std::vector<double> &grid, const ComplexMatrix &D,
                             const std::vector<objective::ObjectiveConfig> &configs, int threads = 1);

// Interior grid points strictly below both neighbours.
int count_grid_local_minima(const std::vector<double> &values);
Index grid_argmin(const std::vector<double> &values);

}  // namespace pdeinv::inversion

#endif  // PDEINV_INVERSION_HPP
