// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/forward_model.hpp"

#include "pdeinv/linalg.hpp"

namespace pdeinv
{

namespace
{

using RowMajorComplex = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Complex row_product(const RowMajorComplex &X, Index a, const RowMajorComplex &Y, Index b)
{
  return (X.row(a).array() * Y.row(b).array()).sum();
}

class DiscreteLinearization : public Linearization
{
public:
  DiscreteLinearization(const DiscreteForwardModel &model, RealVector theta, bool with_gram)
    : model_(model), theta_(std::move(theta)), solution_(model.solve(theta_))
  {
    evaluation_.predicted = solution_->predicted_data();
    if (with_gram)
    {
      evaluation_.gram = solution_->gram();
    }
  }

  RealVector contract(const ComplexMatrix &Y, const ComplexMatrix &X) const override
  {
    const auto derivs = model_.derivatives(theta_);
    const auto &sys = solution_->system();
    const Index n = sys.num_sources();
    if (Y.rows() != n || Y.cols() != n)
    {
      throw Error(ErrorKind::DimensionMismatch, "data weight has the wrong size");
    }
    const RowMajorComplex U = solution_->states();
    const RowMajorComplex Lambda = solution_->solve_transpose(sys.F.conjugate() * Y.adjoint());

    const bool gram_term = X.size() > 0;
    RowMajorComplex Wc, Psi, WXc;
    if (gram_term)
    {
      const ComplexMatrix &W = solution_->adjoint_states();
      const ComplexMatrix Xc = X.conjugate();
      Wc = W.conjugate();
      Psi = solution_->solve(sys.R * (W * Xc));
      WXc = W * Xc;
    }

    RealVector g = RealVector::Zero(static_cast<Index>(derivs.size()));
    for (std::size_t k = 0; k < derivs.size(); ++k)
    {
      Complex data_sum = 0.0;
      Complex gram_sum = 0.0;
      for (const auto &t : derivs[k].dK)
      {
        data_sum += t.value() * row_product(Lambda, t.row(), U, t.col());
        if (gram_term)
        {
          gram_sum += t.value() * row_product(Wc, t.row(), Psi, t.col());
        }
      }
      double value = -data_sum.real();
      if (gram_term)
      {
        value -= gram_sum.real();
        Complex metric_sum = 0.0;
        for (const auto &t : derivs[k].dR)
        {
          metric_sum += t.value() * row_product(Wc, t.row(), WXc, t.col());
        }
        value += 0.5 * metric_sum.real();
      }
      g(static_cast<Index>(k)) = value;
    }
    return g;
  }

private:
  const DiscreteForwardModel &model_;
  RealVector theta_;
  std::unique_ptr<galerkin::DiscreteSolution> solution_;
};

class SpanLinearization : public Linearization
{
public:
  SpanLinearization(const SpanForwardModel &model, RealVector theta, bool with_gram)
    : model_(model), theta_(std::move(theta)), sys_(model.assemble(theta_))
  {
    galerkin::validate(sys_);
    const linalg::LUFactorization lu(sys_.A);
    Ainv_ = lu.solve(ComplexMatrix::Identity(sys_.size(), sys_.size()));
    B_ = Ainv_ * sys_.M;
    C_ = sys_.M * Ainv_;
    evaluation_.predicted = sys_.M * B_;
    if (with_gram)
    {
      evaluation_.gram = linalg::hermitian_part(C_ * sys_.M * C_.adjoint());
    }
  }

  RealVector contract(const ComplexMatrix &Y, const ComplexMatrix &X) const override
  {
    const auto derivs = model_.derivatives(theta_);
    RealVector g(static_cast<Index>(derivs.size()));
    const bool gram_term = X.size() > 0;
    for (std::size_t k = 0; k < derivs.size(); ++k)
    {
      const ComplexMatrix &dM = derivs[k].dM;
      const ComplexMatrix &dA = derivs[k].dA;
      const ComplexMatrix dP = dM * B_ + C_ * dM - C_ * dA * B_;
      double value = (Y * dP).trace().real();
      if (gram_term)
      {
        const ComplexMatrix dC = (dM - C_ * dA) * Ainv_;
        const Complex t1 = (X * dC * sys_.M * C_.adjoint()).trace();
        const Complex t2 = (X * C_ * dM * C_.adjoint()).trace();
        value += 0.5 * (2.0 * t1.real() + t2.real());
      }
      g(static_cast<Index>(k)) = value;
    }
    return g;
  }

private:
  const SpanForwardModel &model_;
  RealVector theta_;
  galerkin::AssembledSystem sys_;
  ComplexMatrix Ainv_, B_, C_;
};

}  // namespace

DenseLinearization::DenseLinearization(Evaluation evaluation, std::vector<ComplexMatrix> dP,
                                       std::vector<ComplexMatrix> dG)
  : dP_(std::move(dP)), dG_(std::move(dG))
{
  evaluation_ = std::move(evaluation);
}

RealVector DenseLinearization::contract(const ComplexMatrix &Y, const ComplexMatrix &X) const
{
  RealVector g(static_cast<Index>(dP_.size()));
  const bool gram_term = X.size() > 0;
  if (gram_term && dG_.size() != dP_.size())
  {
    throw Error(ErrorKind::InvalidArgument, "Gram derivatives were not computed");
  }
  for (std::size_t k = 0; k < dP_.size(); ++k)
  {
    double value = (Y * dP_[k]).trace().real();
    if (gram_term)
    {
      value += 0.5 * (X * dG_[k]).trace().real();
    }
    g(static_cast<Index>(k)) = value;
  }
  return g;
}

std::vector<Eigen::Triplet<Complex>> to_triplets(const SparseReal &X, Complex scale)
{
  std::vector<Eigen::Triplet<Complex>> out;
  out.reserve(static_cast<std::size_t>(X.nonZeros()));
  for (Index col = 0; col < X.outerSize(); ++col)
  {
    for (SparseReal::InnerIterator it(X, col); it; ++it)
    {
      out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), scale * it.value());
    }
  }
  return out;
}

RealVector ParamBounds::project(const RealVector &theta) const
{
  return theta.cwiseMax(lower).cwiseMin(upper);
}

bool ParamBounds::contains(const RealVector &theta) const
{
  return (theta.array() >= lower.array()).all() && (theta.array() <= upper.array()).all();
}

Evaluation ForwardModel::evaluate(const RealVector &theta, bool with_gram) const
{
  return linearize(theta, with_gram)->evaluation();
}

std::unique_ptr<galerkin::DiscreteSolution> DiscreteForwardModel::solve(const RealVector &theta) const
{
  return std::make_unique<galerkin::DiscreteSolution>(assemble(theta));
}

std::unique_ptr<Linearization> DiscreteForwardModel::linearize(const RealVector &theta,
                                                               bool with_gram) const
{
  return std::make_unique<DiscreteLinearization>(*this, theta, with_gram);
}

std::unique_ptr<Linearization> SpanForwardModel::linearize(const RealVector &theta,
                                                           bool with_gram) const
{
  return std::make_unique<SpanLinearization>(*this, theta, with_gram);
}

}  // namespace pdeinv
