#include "t1track/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "t1track/error.hpp"

namespace t1track {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Evaluator {
  const LmProblem& p;

  bool residuals(const Vector& x, Vector& r) const {
    r.resize(static_cast<Eigen::Index>(p.n_residuals));
    p.residuals({x.data(), p.n_params}, {r.data(), p.n_residuals});
    return r.allFinite();
  }

  void jacobian(const Vector& x, const Vector& r, Matrix& j) const {
    j.resize(static_cast<Eigen::Index>(p.n_residuals), static_cast<Eigen::Index>(p.n_params));
    if (p.jacobian) {
      p.jacobian({x.data(), p.n_params}, {j.data(), p.n_residuals * p.n_params});
      return;
    }
    Vector xp = x;
    Vector rp;
    for (std::size_t c = 0; c < p.n_params; ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      double h = 1.5e-8 * std::max(std::abs(x[ci]), 1e-6);
      if (!p.upper.empty() && x[ci] + h > p.upper[c]) h = -h;
      xp[ci] = x[ci] + h;
      residuals(xp, rp);
      j.col(ci) = (rp - r) / h;
      xp[ci] = x[ci];
    }
  }

  void project(Vector& x) const {
    for (std::size_t i = 0; i < p.n_params; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (!p.lower.empty()) x[ii] = std::max(x[ii], p.lower[i]);
      if (!p.upper.empty()) x[ii] = std::min(x[ii], p.upper[i]);
    }
  }
};

}  // namespace

LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> x0, const LmOptions& opts) {
  if (x0.size() != problem.n_params || problem.n_params == 0 ||
      (!problem.lower.empty() && problem.lower.size() != problem.n_params) ||
      (!problem.upper.empty() && problem.upper.size() != problem.n_params)) {
    throw ConfigError("levenberg_marquardt: dimension mismatch");
  }
  const Evaluator ev{problem};
  Vector x = Eigen::Map<Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  ev.project(x);
  Vector r;
  if (!ev.residuals(x, r)) throw FitDiverged("levenberg_marquardt: non-finite residuals at start");
  double cost = 0.5 * r.squaredNorm();

  Matrix j;
  double lambda = opts.lambda0;
  LmResult out;
  int it = 0;
  ev.jacobian(x, r, j);
  for (; it < opts.max_iterations; ++it) {
    const Matrix jtj = j.transpose() * j;
    const Vector g = j.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <= opts.gtol * std::max(1.0, cost)) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (lambda < 1e16) {
      Matrix a = jtj;
      for (Eigen::Index d = 0; d < a.rows(); ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-12);
      Vector step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Vector xn = x + step;
      ev.project(xn);
      Vector rn;
      if (ev.residuals(xn, rn)) {
        const double cn = 0.5 * rn.squaredNorm();
        if (cn < cost) {
          const double dx = (xn - x).norm();
          const double rel_f = (cost - cn) / std::max(cost, std::numeric_limits<double>::min());
          x = xn;
          r = rn;
          cost = cn;
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          if (rel_f <= opts.ftol || dx <= opts.xtol * (x.norm() + opts.xtol)) out.converged = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      out.converged = true;  // no descent direction left: local minimum to working precision
      break;
    }
    ev.jacobian(x, r, j);
    if (out.converged) {
      ++it;
      break;
    }
  }

  out.x.assign(x.data(), x.data() + x.size());
  out.cost = cost;
  out.iterations = it;
  out.residuals.assign(r.data(), r.data() + r.size());
  const Matrix jtj = j.transpose() * j;
  Eigen::FullPivLU<Matrix> lu(jtj);
  if (lu.isInvertible()) {
    const Matrix cov = lu.inverse();
    out.covariance.assign(cov.data(), cov.data() + cov.size());
  }
  return out;
}

}  // namespace t1track
