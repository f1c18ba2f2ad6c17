// Copyright The pdeinv Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdeinv/inversion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pdeinv/linalg.hpp"

namespace pdeinv::inversion
{

namespace
{

struct Point
{
  double alpha = 0.0;
  RealVector x;
  double f = 0.0;
  RealVector g;
  double slope = 0.0;  // dφ/dα along the projected path
};

bool at_lower(const ParamBounds &b, const RealVector &x, Index i)
{
  return b.lower.size() > 0 && x(i) <= b.lower(i);
}

bool at_upper(const ParamBounds &b, const RealVector &x, Index i)
{
  return b.upper.size() > 0 && x(i) >= b.upper(i);
}

RealVector project(const ParamBounds &b, const RealVector &x)
{
  return b.lower.size() == 0 ? x : b.project(x);
}

// x − Π(x − g): zero exactly at a stationary point of the box problem.
RealVector projected_gradient(const ParamBounds &b, const RealVector &x, const RealVector &g)
{
  return x - project(b, x - g);
}

class LineSearch
{
public:
  LineSearch(const ObjectiveFunction &f, const ParamBounds &bounds, const LbfgsOptions &opt,
             const Point &start, const RealVector &direction, int &evaluations)
    : f_(f), bounds_(bounds), opt_(opt), start_(start), d_(direction), evaluations_(evaluations)
  {
  }

  // Strong Wolfe search; returns false when no acceptable step was found.
  bool run(double alpha, Point &accepted, Point &best)
  {
    best_ = &best;
    Point prev = start_;
    prev.alpha = 0.0;
    for (int i = 0; i < opt_.max_line_search; ++i)
    {
      Point cur = eval(alpha);
      if (violates_decrease(cur) || (i > 0 && cur.f >= prev.f))
      {
        return zoom(prev, cur, accepted);
      }
      if (std::abs(cur.slope) <= -opt_.c2 * start_.slope)
      {
        accepted = cur;
        return true;
      }
      if (cur.slope >= 0.0)
      {
        return zoom(cur, prev, accepted);
      }
      prev = cur;
      alpha *= 2.0;
    }
    return false;
  }

private:
  Point eval(double alpha)
  {
    Point p;
    p.alpha = alpha;
    p.x = project(bounds_, start_.x + alpha * d_);
    p.f = f_(p.x, p.g);
    ++evaluations_;
    if (!std::isfinite(p.f))
    {
      p.f = std::numeric_limits<double>::infinity();
      p.slope = 0.0;
      return p;
    }
    // the projected path moves only the coordinates that stay inside the box
    p.slope = 0.0;
    const RealVector raw = start_.x + alpha * d_;
    for (Index i = 0; i < d_.size(); ++i)
    {
      if (raw(i) == p.x(i))
      {
        p.slope += p.g(i) * d_(i);
      }
    }
    if (p.f < best_->f)
    {
      *best_ = p;
    }
    return p;
  }

  bool violates_decrease(const Point &p) const
  {
    return p.f > start_.f + opt_.c1 * p.alpha * start_.slope;
  }

  bool zoom(Point lo, Point hi, Point &accepted)
  {
    for (int i = 0; i < opt_.max_line_search; ++i)
    {
      const double a = interpolate(lo, hi);
      if (!(std::abs(hi.alpha - lo.alpha) > 1e-16 * std::max(1.0, std::abs(lo.alpha))))
      {
        return false;
      }
      Point cur = eval(a);
      if (violates_decrease(cur) || cur.f >= lo.f)
      {
        hi = cur;
        continue;
      }
      if (std::abs(cur.slope) <= -opt_.c2 * start_.slope)
      {
        accepted = cur;
        return true;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0)
      {
        hi = lo;
      }
      lo = cur;
    }
    return false;
  }

  // Minimizer of the cubic through both end points, kept away from the ends;
  // bisection when the cubic is unusable.
  static double interpolate(const Point &lo, const Point &hi)
  {
    const double a = lo.alpha, b = hi.alpha;
    const double left = std::min(a, b), right = std::max(a, b);
    const double margin = 0.1 * (right - left);
    double t = 0.5 * (a + b);
    if (std::isfinite(hi.f))
    {
      const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
      const double disc = d1 * d1 - lo.slope * hi.slope;
      if (disc >= 0.0)
      {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double cand = b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
        if (std::isfinite(cand))
        {
          t = cand;
        }
      }
    }
    return std::clamp(t, left + margin, right - margin);
  }

  const ObjectiveFunction &f_;
  const ParamBounds &bounds_;
  const LbfgsOptions &opt_;
  const Point &start_;
  const RealVector &d_;
  int &evaluations_;
  Point *best_ = nullptr;
};

}  // namespace

InversionReport lbfgs_minimize(const ObjectiveFunction &f, const RealVector &initial, const ParamBounds &bounds,
                               const LbfgsOptions &options)
{
  InversionReport report;
  Point cur;
  cur.x = project(bounds, initial);
  cur.f = f(cur.x, cur.g);
  report.evaluations = 1;
  report.theta_history.push_back(cur.x);
  report.objective_history.push_back(cur.f);

  std::deque<std::pair<RealVector, RealVector>> memory;
  const Index n = cur.x.size();
  auto finish = [&](const Point &p, bool converged, std::string message)
  {
    report.final_theta = p.x;
    report.final_objective = p.f;
    report.converged = converged;
    report.message = std::move(message);
    return report;
  };

  for (;;)
  {
    if (!std::isfinite(cur.f))
    {
      throw Error(ErrorKind::InvalidArgument, "objective is not finite at the starting point");
    }
    if (projected_gradient(bounds, cur.x, cur.g).norm() <= options.gradient_tol * (1.0 + std::abs(cur.f)))
    {
      return finish(cur, true, "gradient tolerance reached");
    }
    if (report.iterations >= options.max_iterations)
    {
      return finish(cur, false, "iteration limit reached");
    }

    // coordinates held at a bound by the gradient are frozen for this step
    Eigen::Array<bool, Eigen::Dynamic, 1> frozen(n);
    for (Index i = 0; i < n; ++i)
    {
      frozen(i) = (at_lower(bounds, cur.x, i) && cur.g(i) > 0.0) || (at_upper(bounds, cur.x, i) && cur.g(i) < 0.0);
    }
    RealVector q = cur.g;
    for (Index i = 0; i < n; ++i)
    {
      if (frozen(i))
      {
        q(i) = 0.0;
      }
    }
    const RealVector free_gradient = q;

    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;)
    {
      const auto &[s, y] = memory[m];
      alphas[m] = s.dot(q) / y.dot(s);
      q -= alphas[m] * y;
    }
    double step = 1.0;
    if (!memory.empty())
    {
      const auto &[s, y] = memory.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    else
    {
      // first step (or after a reset): unit step along a direction of length ≤ 1
      q /= std::max(1.0, q.norm());
    }
    for (std::size_t m = 0; m < memory.size(); ++m)
    {
      const auto &[s, y] = memory[m];
      const double beta = y.dot(q) / y.dot(s);
      q += (alphas[m] - beta) * s;
    }
    RealVector d = -q;
    for (Index i = 0; i < n; ++i)
    {
      if (frozen(i) || (at_lower(bounds, cur.x, i) && d(i) < 0.0) || (at_upper(bounds, cur.x, i) && d(i) > 0.0))
      {
        d(i) = 0.0;
      }
    }
    cur.slope = cur.g.dot(d);
    if (!(cur.slope < 0.0))
    {
      memory.clear();
      d = -free_gradient / std::max(1.0, free_gradient.norm());
      cur.slope = cur.g.dot(d);
      if (!(cur.slope < 0.0))
      {
        return finish(cur, true, "no feasible descent direction");
      }
    }

    Point next, best = cur;
    LineSearch search(f, bounds, options, cur, d, report.evaluations);
    if (!search.run(step, next, best))
    {
      if (best.f < cur.f)
      {
        report.theta_history.push_back(best.x);
        report.objective_history.push_back(best.f);
        ++report.iterations;
      }
      return finish(best.f < cur.f ? best : cur, false,
                    std::string(to_string(ErrorKind::LineSearchFailure)) + ": no step satisfied the Wolfe conditions");
    }

    const RealVector s = next.x - cur.x, y = next.g - cur.g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm() && s.dot(y) > 0.0)
    {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > options.memory)
      {
        memory.pop_front();
      }
    }
    cur = next;
    ++report.iterations;
    report.theta_history.push_back(cur.x);
    report.objective_history.push_back(cur.f);
  }
}

InversionReport lbfgs_minimize(const ForwardModel &model, const RealVector &initial, const ComplexMatrix &D,
                               const objective::ObjectiveConfig &config, const LbfgsOptions &options)
{
  config.validate();
  auto f = [&](const RealVector &theta, RealVector &gradient)
  {
    const auto res = objective::evaluate(model, theta, D, config, true);
    gradient = res.gradient;
    return res.value;
  };
  InversionReport report = lbfgs_minimize(f, initial, model.bounds(), options);
  const auto final = objective::evaluate(model, report.final_theta, D, config, false);
  report.data_fit = final.residual.norm() / std::max(D.norm(), std::numeric_limits<double>::min());
  return report;
}

DirectResult direct_method(const ComplexMatrix &D, const galerkin::AssembledSystem &sys, double lambda,
                           const DirectOptions &options)
{
  const Index n = sys.size();
  const Index p = static_cast<Index>(sys.H.size());
  if (D.rows() != n || D.cols() != n || !sys.S || p == 0)
  {
    throw Error(ErrorKind::DimensionMismatch, "direct method needs square data, S and H of matching size");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(D);
  const auto &sv = svd.singularValues();
  if (!(sv(n - 1) > static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sv(0)))
  {
    throw Error(ErrorKind::SingularData, "data matrix is numerically singular (condition " +
                                           std::to_string(sv(0) / sv(n - 1)) + ")");
  }
  const ComplexMatrix rhs = sys.M * linalg::general_solve(D, sys.M) - sys.M + lambda * *sys.S;

  std::vector<std::pair<Index, Index>> eqs;
  if (options.full_least_squares)
  {
    for (Index j = 0; j < n; ++j)
    {
      for (Index i = 0; i < n; ++i)
      {
        eqs.emplace_back(i, j);
      }
    }
  }
  else
  {
    const Index rows = options.num_rows < 0 ? p : options.num_rows;
    if (options.column < 0 || options.column >= n || rows > n)
    {
      throw Error(ErrorKind::InvalidArgument, "equation subset is out of range");
    }
    for (Index i = 0; i < rows; ++i)
    {
      eqs.emplace_back(i, options.column);
    }
  }

  // complex equations, real unknowns: real and imaginary parts stacked
  const Index m = static_cast<Index>(eqs.size());
  RealMatrix H(2 * m, p);
  RealVector b(2 * m);
  for (Index e = 0; e < m; ++e)
  {
    const auto [i, j] = eqs[static_cast<std::size_t>(e)];
    for (Index k = 0; k < p; ++k)
    {
      H(e, k) = sys.H[static_cast<std::size_t>(k)](i, j);
      H(m + e, k) = 0.0;
    }
    b(e) = rhs(i, j).real();
    b(m + e) = rhs(i, j).imag();
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(H);
  DirectResult out;
  out.rank = qr.rank();
  if (out.rank < p)
  {
    throw Error(ErrorKind::RankDeficient,
                "selected equations have rank " + std::to_string(out.rank) + " < " + std::to_string(p));
  }
  out.coefficients = qr.solve(b);
  out.residual = (H * out.coefficients - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());
  return out;
}

LandscapeScan landscape_scan(const ForwardModel &model, const RealVector &base, Index param,
                             const std::vector<double> &grid, const ComplexMatrix &D,
                             const std::vector<objective::ObjectiveConfig> &configs, int threads)
{
  if (param < 0 || param >= base.size())
  {
    throw Error(ErrorKind::InvalidArgument, "scanned parameter index is out of range");
  }
  bool need_gram = false;
  for (const auto &c : configs)
  {
    c.validate();
    need_gram |= c.metric == objective::MetricMode::Variable && c.rho.kind() != objective::Rho::Kind::Infinity;
  }
  LandscapeScan scan;
  scan.theta_grid = grid;
  for (const auto &c : configs)
  {
    scan.curves.push_back({c.rho, c.metric, std::vector<double>(grid.size())});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]
  {
    for (std::size_t t = next++; t < grid.size(); t = next++)
    {
      try
      {
        RealVector theta = base;
        theta(param) = grid[t];
        const Evaluation ev = model.evaluate(theta, need_gram);
        const ComplexMatrix E = D - ev.predicted;
        for (std::size_t c = 0; c < configs.size(); ++c)
        {
          scan.curves[c].J[t] = objective::objective_value(E, ev.gram, configs[c]);
        }
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
        next = grid.size();
      }
    }
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(grid.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
  return scan;
}

int count_grid_local_minima(const std::vector<double> &values)
{
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
  {
    if (values[i] < values[i - 1] && values[i] < values[i + 1])
    {
      ++count;
    }
  }
  return count;
}

Index grid_argmin(const std::vector<double> &values)
{
  if (values.empty())
  {
    throw Error(ErrorKind::InvalidArgument, "empty curve");
  }
  return static_cast<Index>(std::min_element(values.begin(), values.end()) - values.begin());
}

}  // namespace pdeinv::inversion
