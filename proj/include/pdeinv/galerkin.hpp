// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_GALERKIN_HPP
#define PDEINV_GALERKIN_HPP

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "pdeinv/types.hpp"

// Index and conjugation conventions shared by every module:
//   sesquilinear forms are linear in the first argument, antilinear in the second;
//   M_ij = ⟨p_i, p_j⟩_U,  A_ij = conj(𝒜_c(p_j, p_i)),
//   U solves Σ_k 𝒜_c(p_k, p_i) U_kj = ⟨p_j, p_i⟩_U, so conj(U) = A⁻¹M,
//   E = D − M·conj(U) = D − M A⁻¹ M,  G = M A⁻¹ M A⁻* M.
namespace pdeinv::galerkin
{

enum class InnerProductMode
{
  CoefficientIndependent,
  CoefficientDependent,
};

enum class BasisMode
{
  FullFem,
  SpanOfSources,
};

// Galerkin matrices on the n-dimensional span of the source representers.
struct AssembledSystem
{
  ComplexMatrix M;
  ComplexMatrix A;
  std::optional<ComplexMatrix> S;  // L² Gram of the representers
  std::vector<RealMatrix> H;       // H[k](i, j) = ⟨ψ_k p_i, p_j⟩_{L²}
  InnerProductMode inner_product = InnerProductMode::CoefficientIndependent;

  Index size() const { return M.rows(); }
};

// Throws when M is not Hermitian positive definite or A is not conformant.
void validate(const AssembledSystem &sys);

ComplexMatrix forward_solve(const AssembledSystem &sys);
ComplexMatrix adjoint_solve(const AssembledSystem &sys);
// M A⁻¹ M: the data the system predicts.
ComplexMatrix predicted_data(const AssembledSystem &sys);
ComplexMatrix residual_matrix(const AssembledSystem &sys, const ComplexMatrix &D);
ComplexMatrix gram_variable(const AssembledSystem &sys);
// conj(W)* M conj(W) for adjoint coefficient columns W.
ComplexMatrix gram_from_states(const ComplexMatrix &W, const ComplexMatrix &M);

// A discretization on a full finite-element (or finite-difference) space
// {φ_a}, a = 1..N:
//   K_ab = 𝒜_c(φ_b, φ_a),  F_ai = P_i(φ_a),  R_ab = ⟨φ_b, φ_a⟩_U.
// States solve K u_j = F_j, adjoint states K* w_j = F_j, data d_ij = F_iᵀ conj(u_j),
// and the Gram is g_ik = ⟨w_i, w_k⟩_U.
struct DiscreteSystem
{
  SparseComplex K;
  ComplexMatrix F;
  SparseComplex R;

  Index dimension() const { return K.rows(); }
  Index num_sources() const { return F.cols(); }
};

// Factorization of K with cached states. Solves reuse one sparse LU.
class DiscreteSolution
{
public:
  explicit DiscreteSolution(DiscreteSystem system);

  const DiscreteSystem &system() const { return system_; }
  const ComplexMatrix &states() const { return states_; }
  const ComplexMatrix &adjoint_states() const;
  ComplexMatrix predicted_data() const;
  ComplexMatrix gram() const;

  ComplexMatrix solve(const ComplexMatrix &B) const;
  ComplexMatrix solve_transpose(const ComplexMatrix &B) const;
  ComplexMatrix solve_adjoint(const ComplexMatrix &B) const;

  // ⟨x, y⟩_U = yᴴ R x.
  Complex inner(const ComplexVector &x, const ComplexVector &y) const;

private:
  DiscreteSystem system_;
  mutable Eigen::SparseLU<SparseComplex> lu_;  // transpose views are non-const in Eigen
  ComplexMatrix states_;
  mutable std::optional<ComplexMatrix> adjoint_states_;
};

// Restricts a full discretization to span{p_i} where p = Riesz⁻¹F are the
// representers of the sources under the inner-product matrix `riesz`.
// `mass` and `potential_modes` are optional L² forms for S and H.
struct SpanReduction
{
  AssembledSystem system;
  ComplexMatrix representers;  // N × n columns p_i
};

SpanReduction reduce_to_span(const DiscreteSystem &full, const SparseComplex &riesz,
                             InnerProductMode mode, const SparseReal *mass = nullptr,
                             const std::vector<SparseReal> *potential_modes = nullptr);

// Views a span system as a discrete one over the representers themselves.
DiscreteSystem as_discrete(const AssembledSystem &sys);

SparseComplex to_complex(const SparseReal &X);

}  // namespace pdeinv::galerkin

#endif  // PDEINV_GALERKIN_HPP
