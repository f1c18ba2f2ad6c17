// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/objective.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdeinv/linalg.hpp"

namespace pdeinv::objective
{

namespace
{

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void require_square_pair(const ComplexMatrix &E, const ComplexMatrix &G)
{
  if (G.rows() != G.cols() || E.rows() != G.rows())
  {
    throw Error(ErrorKind::DimensionMismatch, "residual and Gram sizes disagree");
  }
}

// Weighted residual Z = W⁻¹E for the metric of `config`, or E itself for the
// identity metric. Returns false for the identity metric.
bool weighted_residual(const ComplexMatrix &E, const ComplexMatrix *G, const Rho &rho,
                       ComplexMatrix &Z)
{
  if (G == nullptr || rho.kind() == Rho::Kind::Infinity)
  {
    Z = E;
    return false;
  }
  require_square_pair(E, *G);
  const ComplexMatrix Gh = linalg::hermitian_part(*G);
  if (rho.kind() == Rho::Kind::ZeroLimit)
  {
    Z = linalg::HermitianFactorization(Gh).solve(E);
  }
  else
  {
    const Index n = G->rows();
    const ComplexMatrix B = ComplexMatrix::Identity(n, n) + Gh / rho.value();
    Z = linalg::HermitianFactorization(B).solve(E);
  }
  return true;
}

double half_trace(const ComplexMatrix &E, const ComplexMatrix &Z)
{
  return std::max(0.5 * (E.adjoint() * Z).trace().real(), 0.0);
}

}  // namespace

Rho Rho::finite(double value)
{
  if (!(value > 0.0) || !std::isfinite(value))
  {
    std::ostringstream msg;
    msg << "rho must be a positive finite number, got " << value;
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  return Rho(Kind::Finite, value);
}

Rho Rho::parse(const std::string &text)
{
  const std::string t = lower(text);
  if (t == "inf" || t == "infinity" || t == "+inf")
  {
    return infinity();
  }
  std::size_t used = 0;
  double value = 0.0;
  try
  {
    value = std::stod(t, &used);
  }
  catch (const std::exception &)
  {
    throw Error(ErrorKind::InvalidArgument, "cannot parse rho '" + text + "'");
  }
  if (used != t.size())
  {
    throw Error(ErrorKind::InvalidArgument, "cannot parse rho '" + text + "'");
  }
  if (value == 0.0)
  {
    return zero_limit();
  }
  if (std::isinf(value) && value > 0.0)
  {
    return infinity();
  }
  return finite(value);
}

std::string Rho::to_string() const
{
  switch (kind_)
  {
    case Kind::Infinity: return "inf";
    case Kind::ZeroLimit: return "0";
    case Kind::Finite: break;
  }
  std::ostringstream out;
  out.precision(17);
  out << value_;
  return out.str();
}

MetricMode parse_metric_mode(const std::string &text)
{
  const std::string t = lower(text);
  if (t == "conventional")
  {
    return MetricMode::Conventional;
  }
  if (t == "variable")
  {
    return MetricMode::Variable;
  }
  if (t == "data_driven" || t == "data-driven" || t == "datadriven")
  {
    return MetricMode::DataDriven;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown metric mode '" + text + "'");
}

std::string to_string(MetricMode mode)
{
  switch (mode)
  {
    case MetricMode::Conventional: return "conventional";
    case MetricMode::Variable: return "variable";
    case MetricMode::DataDriven: return "data_driven";
  }
  return "unknown";
}

void ObjectiveConfig::validate() const
{
  if (metric == MetricMode::DataDriven)
  {
    if (!data_gram)
    {
      throw Error(ErrorKind::InvalidArgument, "data-driven metric needs a data Gram");
    }
    if (!linalg::is_hermitian(*data_gram, 1e-8))
    {
      throw Error(ErrorKind::NotPositiveDefinite, "data Gram is not Hermitian");
    }
  }
}

RepresenterSolution representer_coefficients(const ComplexMatrix &G, const ComplexMatrix &E,
                                             double rho)
{
  if (!(rho > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "representer solve needs rho > 0");
  }
  require_square_pair(E, G);
  const Index n = G.rows();
  const ComplexMatrix shifted = G + rho * ComplexMatrix::Identity(n, n);
  RepresenterSolution out;
  out.alpha = linalg::HermitianFactorization(shifted).solve(E);
  const ComplexMatrix fit = G * out.alpha - E;
  out.objective_value =
    0.5 * fit.squaredNorm() + 0.5 * rho * (out.alpha.adjoint() * G * out.alpha).trace().real();
  return out;
}

double objective_infty(const ComplexMatrix &E)
{
  return 0.5 * E.squaredNorm();
}

double objective_zero(const ComplexMatrix &E, const ComplexMatrix &G)
{
  ComplexMatrix Z;
  weighted_residual(E, &G, Rho::zero_limit(), Z);
  return half_trace(E, Z);
}

double objective_rho(const ComplexMatrix &E, const ComplexMatrix &G, const Rho &rho)
{
  ComplexMatrix Z;
  weighted_residual(E, &G, rho, Z);
  return half_trace(E, Z);
}

double objective_value(const ComplexMatrix &E, const std::optional<ComplexMatrix> &model_gram,
                       const ObjectiveConfig &config)
{
  config.validate();
  const ComplexMatrix *G = nullptr;
  if (config.metric == MetricMode::Variable)
  {
    if (config.rho.kind() != Rho::Kind::Infinity && !model_gram)
    {
      throw Error(ErrorKind::InvalidArgument, "variable metric needs the model Gram");
    }
    G = model_gram ? &*model_gram : nullptr;
  }
  else if (config.metric == MetricMode::DataDriven)
  {
    G = &*config.data_gram;
  }
  ComplexMatrix Z;
  weighted_residual(E, G, config.rho, Z);
  return half_trace(E, Z);
}

double objective_zero_span(const galerkin::AssembledSystem &sys, const ComplexMatrix &D)
{
  galerkin::validate(sys);
  const linalg::HermitianFactorization Mf(sys.M);
  const ComplexMatrix T = sys.M - sys.A * Mf.solve(D);
  return half_trace(T, Mf.solve(T));
}

ObjectiveResult evaluate(const ForwardModel &model, const RealVector &theta, const ComplexMatrix &D,
                         const ObjectiveConfig &config, bool with_gradient)
{
  config.validate();
  const bool uses_model_gram =
    config.metric == MetricMode::Variable && config.rho.kind() != Rho::Kind::Infinity;
  const auto lin = model.linearize(theta, uses_model_gram);
  const Evaluation &ev = lin->evaluation();
  if (D.rows() != ev.predicted.rows() || D.cols() != ev.predicted.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "data matrix does not match the model");
  }

  ObjectiveResult out;
  out.residual = D - ev.predicted;
  const ComplexMatrix *G = nullptr;
  if (config.metric == MetricMode::Variable)
  {
    G = ev.gram ? &*ev.gram : nullptr;
  }
  else if (config.metric == MetricMode::DataDriven)
  {
    G = &*config.data_gram;
  }
  ComplexMatrix Z;
  const bool weighted = weighted_residual(out.residual, G, config.rho, Z);
  out.value = half_trace(out.residual, Z);

  if (with_gradient)
  {
    ComplexMatrix X;
    if (weighted && uses_model_gram && !config.freeze_gram)
    {
      X = Z * Z.adjoint();
      if (config.rho.kind() == Rho::Kind::Finite)
      {
        X /= config.rho.value();
      }
    }
    out.gradient = -lin->contract(Z.adjoint(), X);
  }
  return out;
}

namespace
{

void factor_inner_product(const SparseComplex &R, Eigen::SparseLU<SparseComplex> &lu)
{
  lu.compute(R);
  if (lu.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "inner-product matrix is singular");
  }
}

// ½ Σ_j ‖v_j‖²_U for the columns of V.
double half_norm_sq(const ComplexMatrix &V, const SparseComplex &R)
{
  return 0.5 * (V.adjoint() * (R * V)).trace().real();
}

}  // namespace

ProjectionCheck projection_solution_residual(const galerkin::DiscreteSystem &current,
                                             const galerkin::DiscreteSystem &truth)
{
  if (truth.F.rows() != current.F.rows() || truth.F.cols() != current.F.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "current and true systems use different sources");
  }
  const galerkin::DiscreteSolution at_c(current);
  const galerkin::DiscreteSolution at_true(truth);
  SparseComplex R = current.R;
  R.makeCompressed();
  Eigen::SparseLU<SparseComplex> riesz;
  factor_inner_product(R, riesz);

  const ComplexMatrix p = riesz.solve(current.F);
  const auto ortho = linalg::orthonormalize(p, [&](const ComplexVector &x, const ComplexVector &y) {
    return at_c.inner(x, y);
  });
  const ComplexMatrix &L = ortho.coefficients;
  const ComplexMatrix &q = ortho.basis;

  // The orthonormal representers q = pL belong to the sources F·L, whose
  // states are U·L by linearity.
  const ComplexMatrix u = at_c.states() * L;
  const ComplexMatrix u_true = at_true.states() * L;
  const ComplexMatrix projected = q * (q.adjoint() * (R * (u - u_true)));

  ProjectionCheck out;
  out.projection = half_norm_sq(projected, R);
  const ComplexMatrix F_on = current.F * L;
  const ComplexMatrix E = F_on.transpose() * (u_true - u).conjugate();
  out.objective = objective_infty(E);
  return out;
}

ProjectionCheck projection_pde_residual(const galerkin::DiscreteSystem &current,
                                        const galerkin::DiscreteSystem &truth)
{
  if (truth.F.rows() != current.F.rows() || truth.F.cols() != current.F.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "current and true systems use different sources");
  }
  const galerkin::DiscreteSolution at_c(current);
  const galerkin::DiscreteSolution at_true(truth);
  SparseComplex R = current.R;
  R.makeCompressed();
  Eigen::SparseLU<SparseComplex> riesz;
  factor_inner_product(R, riesz);

  // Riesz representers of ℰ_j = 𝒜_c(ǔ_j, ·) − 𝒜_č(ǔ_j, ·).
  const ComplexMatrix &u_true = at_true.states();
  const ComplexMatrix s = riesz.solve(current.K * u_true - truth.K * u_true);

  // Orthogonal projection onto W_n = span{w_i}: solve the normal equations
  // in ⟨·,·⟩_U.
  const ComplexMatrix &W = at_c.adjoint_states();
  const ComplexMatrix gram_w = linalg::hermitian_part(W.adjoint() * (R * W));
  const ComplexMatrix beta = linalg::HermitianFactorization(gram_w).solve(W.adjoint() * (R * s));

  ProjectionCheck out;
  out.projection = half_norm_sq(W * beta, R);
  const ComplexMatrix E = at_true.predicted_data() - at_c.predicted_data();
  out.objective = objective_zero(E, at_c.gram());
  return out;
}

}  // namespace pdeinv::objective
