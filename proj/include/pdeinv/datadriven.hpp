// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PDEINV_DATADRIVEN_HPP
#define PDEINV_DATADRIVEN_HPP

#include <optional>
#include <string>

#include "pdeinv/types.hpp"

// Gram matrices at the true coefficient estimated from measurements alone.
namespace pdeinv::datadriven
{

struct DataGram
{
  ComplexMatrix G;                      // Hermitian PSD after post-processing
  double symmetry_defect = 0.0;         // ‖G̃ − G̃*‖_F / ‖G̃‖_F before symmetrization
  double min_eigenvalue_before = 0.0;   // of the symmetrized estimate, before flooring
  Index clipped = 0;                    // eigenvalues raised to zero
  std::string provenance;
};

// Relative defect above which an estimate is rejected with StepTooLarge.
inline constexpr double kMaxSymmetryDefect = 1e-3;

// G̃ = Dᵀ for self-adjoint problems with the 𝒜_c-weighted inner product.
// AsymmetricData when ‖D − Dᵀ‖_F > tol·‖D‖_F.
DataGram elliptic_gram_from_data(const ComplexMatrix &D, double tol = 1e-8);

// Elliptic-style estimate for wave problems where no exact data formula is
// available: the Hermitian part of Dᵀ, floored to PSD. Reciprocal data are
// required (AsymmetricData otherwise); no symmetry-defect rejection.
DataGram wave_gram_from_data(const ComplexMatrix &D, double tol = 1e-6);

// g_ij = Re(d_ij + (k/2)d′_ij) + (ik²/2c(1))(conj(b′_i)b_j − conj(b_i)b′_j) with
// central differences of step h in k.
DataGram helmholtz_gram_from_data(const ComplexMatrix &D_minus, const ComplexMatrix &D,
                                  const ComplexMatrix &D_plus, const ComplexVector &b_minus,
                                  const ComplexVector &b, const ComplexVector &b_plus, double k,
                                  double h, double c_boundary);

// g_ij = d_ij(λ) + λ d′_ij(λ). Central differences when D(λ − h) is given,
// one-sided otherwise.
DataGram schrodinger_gram_from_data(const std::optional<ComplexMatrix> &D_minus,
                                    const ComplexMatrix &D, const ComplexMatrix &D_plus,
                                    double lambda, double h);

}  // namespace pdeinv::datadriven

#endif  // PDEINV_DATADRIVEN_HPP
