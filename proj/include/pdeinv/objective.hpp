// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_OBJECTIVE_HPP
#define PDEINV_OBJECTIVE_HPP

#include <optional>
#include <string>

#include "pdeinv/forward_model.hpp"
#include "pdeinv/galerkin.hpp"

namespace pdeinv::objective
{

// Penalty parameter: a finite positive value or one of the two limits.
class Rho
{
public:
  enum class Kind
  {
    Finite,
    Infinity,
    ZeroLimit,
  };

  static Rho finite(double value);
  static Rho infinity() { return Rho(Kind::Infinity, 0.0); }
  static Rho zero_limit() { return Rho(Kind::ZeroLimit, 0.0); }
  // Accepts a positive number, "inf"/"infinity", or "0".
  static Rho parse(const std::string &text);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  std::string to_string() const;

private:
  Rho(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

enum class MetricMode
{
  Conventional,
  Variable,
  DataDriven,
};

MetricMode parse_metric_mode(const std::string &text);
std::string to_string(MetricMode mode);

struct ObjectiveConfig
{
  Rho rho = Rho::finite(1.0);
  MetricMode metric = MetricMode::Variable;
  std::optional<ComplexMatrix> data_gram;  // required iff metric == DataDriven
  // Treat G(c) as constant when differentiating the variable metric.
  bool freeze_gram = false;

  void validate() const;
};

struct RepresenterSolution
{
  ComplexMatrix alpha;  // column j holds α_j
  double objective_value;
};

// Solves (G + ρI)α_j = e_j and evaluates the inner relaxed objective
// Σ_j ½‖Gα_j − e_j‖² + (ρ/2)α_j*Gα_j.
RepresenterSolution representer_coefficients(const ComplexMatrix &G, const ComplexMatrix &E,
                                             double rho);

// ½ trace(E* E).
double objective_infty(const ComplexMatrix &E);
// ½ trace(E* G⁻¹ E); NotPositiveDefinite when G is rank deficient.
double objective_zero(const ComplexMatrix &E, const ComplexMatrix &G);
// ½ trace(E* (I + ρ⁻¹G)⁻¹ E) with the limits dispatched to the two functions above.
double objective_rho(const ComplexMatrix &E, const ComplexMatrix &G, const Rho &rho);
// The weighted objective of `config` given the residual and the model Gram
// (ignored unless the metric is variable).
double objective_value(const ComplexMatrix &E, const std::optional<ComplexMatrix> &model_gram,
                       const ObjectiveConfig &config);

// J_0 on span{p_i} written without G: ½ tr[(M − A M⁻¹D)* M⁻¹ (M − A M⁻¹D)].
double objective_zero_span(const galerkin::AssembledSystem &sys, const ComplexMatrix &D);

struct ObjectiveResult
{
  double value = 0.0;
  RealVector gradient;  // empty unless requested
  ComplexMatrix residual;
};

// Evaluates the configured objective of a forward model at θ against data D.
ObjectiveResult evaluate(const ForwardModel &model, const RealVector &theta, const ComplexMatrix &D,
                         const ObjectiveConfig &config, bool with_gradient);

// ½ Σ_j ‖Π_{P_n}(u_j(c) − ǔ_j)‖²_U after orthonormalizing the source
// representers in ⟨·,·⟩_U. `current` and `truth` must share F and R.
struct ProjectionCheck
{
  double projection;  // the function-space quantity
  double objective;   // the matching data-space objective
};
ProjectionCheck projection_solution_residual(const galerkin::DiscreteSystem &current,
                                             const galerkin::DiscreteSystem &truth);

// ½ Σ_j ‖Π_{W_n} ℛℰ_j(c)‖²_U with ℰ_j(c) = 𝒜_c(ǔ_j, ·) − 𝒜_č(ǔ_j, ·).
ProjectionCheck projection_pde_residual(const galerkin::DiscreteSystem &current,
                                        const galerkin::DiscreteSystem &truth);

}  // namespace pdeinv::objective

#endif  // PDEINV_OBJECTIVE_HPP
