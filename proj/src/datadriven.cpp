// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/datadriven.hpp"

#include <sstream>

#include "pdeinv/linalg.hpp"

namespace pdeinv::datadriven
{

namespace
{

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "data matrices must be square and of equal size");
  }
}

void require_step(double h)
{
  if (!(h > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  }
}

// Symmetrize, reject large defects, then floor the spectrum at zero.
DataGram finish(const ComplexMatrix &raw, bool check_defect, std::string provenance)
{
  DataGram out;
  const double scale = raw.norm();
  out.symmetry_defect = scale > 0.0 ? (raw - raw.adjoint()).norm() / scale : 0.0;
  if (check_defect && out.symmetry_defect > kMaxSymmetryDefect)
  {
    std::ostringstream msg;
    msg << "data Gram symmetry defect " << out.symmetry_defect << " exceeds "
        << kMaxSymmetryDefect << "; reduce the step";
    throw Error(ErrorKind::StepTooLarge, msg.str());
  }
  out.G = linalg::floor_eigenvalues(raw, &out.clipped, &out.min_eigenvalue_before);
  out.provenance = std::move(provenance);
  return out;
}

}  // namespace

DataGram elliptic_gram_from_data(const ComplexMatrix &D, double tol)
{
  require_same_shape(D, D);
  const double scale = D.norm();
  if ((D - D.transpose()).norm() > tol * scale)
  {
    std::ostringstream msg;
    msg << "data matrix is not symmetric: relative defect " << (D - D.transpose()).norm() / scale;
    throw Error(ErrorKind::AsymmetricData, msg.str());
  }
  return finish(D.transpose(), false, "transpose rule");
}

DataGram wave_gram_from_data(const ComplexMatrix &D, double tol)
{
  require_same_shape(D, D);
  const double scale = D.norm();
  if ((D - D.transpose()).norm() > tol * scale)
  {
    std::ostringstream msg;
    msg << "data matrix is not reciprocal: relative defect " << (D - D.transpose()).norm() / scale;
    throw Error(ErrorKind::AsymmetricData, msg.str());
  }
  return finish(D.transpose(), false, "transpose rule, Hermitian part");
}

DataGram helmholtz_gram_from_data(const ComplexMatrix &D_minus, const ComplexMatrix &D,
                                  const ComplexMatrix &D_plus, const ComplexVector &b_minus,
                                  const ComplexVector &b, const ComplexVector &b_plus, double k,
                                  double h, double c_boundary)
{
  require_same_shape(D_minus, D);
  require_same_shape(D_plus, D);
  require_step(h);
  const Index n = D.rows();
  if (b.size() != n || b_minus.size() != n || b_plus.size() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "one boundary trace per source is required");
  }
  if (!(c_boundary > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "boundary sound speed must be positive");
  }
  const ComplexMatrix dD = (D_plus - D_minus) / (2.0 * h);
  const ComplexVector db = (b_plus - b_minus) / (2.0 * h);
  const Complex factor(0.0, k * k / (2.0 * c_boundary));
  ComplexMatrix G(n, n);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      G(i, j) = std::real(D(i, j) + 0.5 * k * dD(i, j)) +
                factor * (std::conj(db(i)) * b(j) - std::conj(b(i)) * db(j));
    }
  }
  std::ostringstream prov;
  prov.precision(17);
  prov << "helmholtz central difference, k = " << k << ", h = " << h;
  return finish(G, true, prov.str());
}

DataGram schrodinger_gram_from_data(const std::optional<ComplexMatrix> &D_minus,
                                    const ComplexMatrix &D, const ComplexMatrix &D_plus,
                                    double lambda, double h)
{
  require_same_shape(D_plus, D);
  require_step(h);
  ComplexMatrix dD;
  std::ostringstream prov;
  prov.precision(17);
  if (D_minus)
  {
    require_same_shape(*D_minus, D);
    dD = (D_plus - *D_minus) / (2.0 * h);
    prov << "schrodinger central difference";
  }
  else
  {
    dD = (D_plus - D) / h;
    prov << "schrodinger one-sided difference";
  }
  prov << ", lambda = " << lambda << ", h = " << h;
  return finish(D + lambda * dD, true, prov.str());
}

}  // namespace pdeinv::datadriven
