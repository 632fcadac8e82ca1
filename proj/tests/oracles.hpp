#pragma once

// Reference computations used only by the tests. They are written independently of the
// library code paths they check: brute-force enumeration, finite differences, fixed-point
// iterations, and closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ssqp/ssqp.hpp"

namespace oracle {

using ssqp::Matrix;
using ssqp::Vector;

/// Kernel as (u^2 + mu^2) / (2 mu) + max{t - mu, 0} with u = clamp(t, 0, mu).
inline double theta(double t, double mu)
{
  const double u = std::clamp(t, 0.0, mu);
  return (u * u + mu * mu) / (2.0 * mu) + std::max(t - mu, 0.0);
}

inline double smoothed_term(double t, double mu, double q) { return std::pow(theta(t, mu), q); }

inline double F_tilde(const ssqp::ProblemSpec & p, const Vector & x, double mu)
{
  double f = p.h_value(x);
  for (Eigen::Index m = 0; m < p.rows(); ++m) { f += smoothed_term(p.b(m) - p.A.row(m).dot(x), mu, p.q); }
  return f;
}

inline double F(const ssqp::ProblemSpec & p, const Vector & x)
{
  double f = p.h_value(x);
  for (Eigen::Index m = 0; m < p.rows(); ++m) {
    const double r = p.b(m) - p.A.row(m).dot(x);
    if (r > 0.0) { f += std::pow(r, p.q); }
  }
  return f;
}

/// Central differences with step 1e-6 (1 + |x_i|).
inline Vector fd_gradient(const std::function<double(const Vector &)> & f, const Vector & x)
{
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/**
 * Exact QP oracle for tiny problems: enumerates every subset of "<=" rows as the active set,
 * solves the equality-constrained KKT system, and keeps the primal-dual feasible candidate.
 */
inline std::optional<Vector> qp_by_active_sets(const Matrix & H, const Vector & c, const Matrix & N, const Vector & d)
{
  const Eigen::Index n = H.rows();
  const Eigen::Index m = N.rows();
  if (m > 16) { return std::nullopt; }
  std::optional<Vector> best;
  double best_val = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < m; ++i) {
      if ((mask >> i) & 1ul) { act.push_back(i); }
    }
    const Eigen::Index k = static_cast<Eigen::Index>(act.size());
    if (k > n) { continue; }
    Matrix K = Matrix::Zero(n + k, n + k);
    Vector rhs = Vector::Zero(n + k);
    K.topLeftCorner(n, n) = H;
    rhs.head(n) = -c;
    for (Eigen::Index j = 0; j < k; ++j) {
      K.block(0, n + j, n, 1) = N.row(act[static_cast<std::size_t>(j)]).transpose();
      K.block(n + j, 0, 1, n) = N.row(act[static_cast<std::size_t>(j)]);
      rhs(n + j) = d(act[static_cast<std::size_t>(j)]);
    }
    Eigen::FullPivLU<Matrix> lu(K);
    if (lu.rank() < n + k) { continue; }
    const Vector sol = lu.solve(rhs);
    const Vector x = sol.head(n);
    const Vector lam = sol.tail(k);
    if (k > 0 && lam.minCoeff() < -1e-9) { continue; }
    if (m > 0 && ((N * x - d).array() > 1e-9 * (1.0 + d.cwiseAbs().maxCoeff())).any()) { continue; }
    const double val = 0.5 * x.dot(H * x) + c.dot(x);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  return best;
}

/// Projection onto a box by clamping; the reference for box projections.
inline Vector clamp(const Vector & x, const Vector & lo, const Vector & up) { return x.cwiseMax(lo).cwiseMin(up); }

/// Euclidean projection onto {x : N x <= d} by Dykstra's alternating projections onto half-spaces.
inline Vector dykstra(const Vector & y, const Matrix & N, const Vector & d, int sweeps = 20000)
{
  const Eigen::Index m = N.rows();
  Vector x = y;
  Matrix incr = Matrix::Zero(y.size(), m);
  for (int s = 0; s < sweeps; ++s) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector z = x + incr.col(i);
      const double viol = N.row(i).dot(z) - d(i);
      Vector nx = z;
      if (viol > 0.0) { nx -= viol / N.row(i).squaredNorm() * N.row(i).transpose(); }
      incr.col(i) = z - nx;
      change = std::max(change, (nx - x).lpNorm<Eigen::Infinity>());
      x = nx;
    }
    if (change < 1e-14) { break; }
  }
  return x;
}

/// Subgradient descent with diminishing steps for a convex objective; returns the best value seen.
inline double subgradient_min(
  const std::function<double(const Vector &)> & f, const std::function<Vector(const Vector &)> & subgrad, Vector x,
  int iters)
{
  double best = f(x);
  for (int k = 1; k <= iters; ++k) {
    const Vector g = subgrad(x);
    const double gn = g.norm();
    if (gn == 0.0) { break; }
    x -= (0.5 / std::sqrt(static_cast<double>(k))) * g / gn;
    best = std::min(best, f(x));
  }
  return best;
}

/// Minimum of f on a uniform grid over [lo, hi]^n followed by coordinate refinement around the best node.
inline Vector grid_argmin(const std::function<double(const Vector &)> & f, Eigen::Index n, double lo, double hi, int per_axis)
{
  Vector best_x = Vector::Constant(n, lo);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const double h = (hi - lo) / (per_axis - 1);
  for (;;) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) { x(i) = lo + h * idx[static_cast<std::size_t>(i)]; }
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    Eigen::Index i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == per_axis) {
      idx[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) { break; }
  }
  double step = h;
  Vector x = best_x;
  while (step > 1e-10) {
    bool moved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (const double s : {step, -step}) {
        Vector y = x;
        y(i) += s;
        const double v = f(y);
        if (v < best) {
          best = v;
          x = y;
          moved = true;
        }
      }
    }
    if (!moved) { step /= 2.0; }
  }
  return x;
}

}  // namespace oracle
