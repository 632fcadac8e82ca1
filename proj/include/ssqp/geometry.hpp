#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ssqp/errors.hpp"
#include "ssqp/polyhedron.hpp"

/**
 * @file
 * @brief Dense strictly convex QP, Euclidean projection onto polyhedra, and vertex enumeration.
 */

namespace ssqp {

/**
 * @brief Strictly convex quadratic program
 * \f[
 *   \min_x \tfrac12 x^T H x + c^T x \quad \text{s.t.} \quad x \in X .
 * \f]
 */
struct QpProblem
{
  Matrix H;
  Vector c;
  Polyhedron constraints;
};

struct QpOptions
{
  /// Hard pivot budget; 0 selects 50 (n + rows) + 100.
  long max_pivots = 0;
  /// Relative violation threshold for a row to enter the active set.
  double enter_tol = 1e-12;
};

struct QpResult
{
  Vector x;
  /// One multiplier per row of to_rows(constraints), zero when inactive.
  Vector multipliers;
  std::vector<Eigen::Index> active;
  long pivots = 0;
  /// max of stationarity, primal violation and complementarity.
  double kkt_residual = 0.0;
  double objective = 0.0;
};

namespace detail {

/// Max-norm KKT residual of (x, lambda) for min 1/2 x'Hx + c'x s.t. N x <= d.
inline double qp_kkt_residual(
  const Matrix & H, const Vector & c, const LinearRows & rows, const Vector & x, const Vector & lambda)
{
  Vector stat = H * x + c;
  if (rows.rows() > 0) { stat += rows.N.transpose() * lambda; }
  double res = stat.lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double slack = rows.N.row(i).dot(x) - rows.d(i);
    res = std::max(res, std::max(slack, 0.0));
    res = std::max(res, std::abs(lambda(i) * slack));
    res = std::max(res, std::max(-lambda(i), 0.0));
  }
  return res;
}

}  // namespace detail

/**
 * @brief Dual active-set (Goldfarb-Idnani) solver for a strictly convex QP.
 *
 * Starts from the unconstrained minimizer and adds the most violated row each major
 * iteration; rows whose multipliers would turn negative are dropped on the way. After
 * 3 (n + rows) pivots the entering rule switches to the lowest-index violated row.
 * On exit the solution is polished by one equality-constrained solve on the final
 * active set.
 *
 * @throws DomainError if H is not symmetric positive definite.
 * @throws InfeasibleError if the constraints are inconsistent.
 * @throws NumericalFailure if the pivot budget is exhausted.
 */
inline QpResult solve_qp(const QpProblem & p, const QpOptions & opt = {})
{
  const Eigen::Index n = p.H.rows();
  detail::require_same(p.H.cols(), n, "solve_qp H");
  detail::require_same(p.c.size(), n, "solve_qp c");
  detail::require_same(p.constraints.dim(), n, "solve_qp constraints");
  p.constraints.validate();

  const double hscale = std::max(1.0, p.H.lpNorm<Eigen::Infinity>());
  if ((p.H - p.H.transpose()).lpNorm<Eigen::Infinity>() > 1e-10 * hscale) {
    throw DomainError("solve_qp: H is not symmetric");
  }
  Eigen::LLT<Matrix> llt(p.H);
  if (llt.info() != Eigen::Success) { throw DomainError("solve_qp: H is not positive definite"); }

  const LinearRows rows = to_rows(p.constraints);
  const Eigen::Index m = rows.rows();
  const Matrix Hinv = llt.solve(Matrix::Identity(n, n));
  Vector row_norm(m);
  for (Eigen::Index i = 0; i < m; ++i) { row_norm(i) = rows.N.row(i).norm(); }

  Vector x = -llt.solve(p.c);
  std::vector<Eigen::Index> active;
  std::vector<double> u;
  std::vector<char> is_active(static_cast<std::size_t>(m), 0);

  const long budget = opt.max_pivots > 0 ? opt.max_pivots : 50 * static_cast<long>(n + m) + 100;
  const long bland_after = 3 * static_cast<long>(n + m);
  long pivots = 0;

  // Rows are n_i^T x <= d_i; in the method's ">=" convention the normal is -n_i.
  auto violation = [&](Eigen::Index i) {
    return (rows.N.row(i).dot(x) - rows.d(i)) / (1.0 + row_norm(i) * (1.0 + x.norm()) + std::abs(rows.d(i)));
  };

  auto active_normals = [&]() {
    Matrix Nact(n, static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) {
      Nact.col(static_cast<Eigen::Index>(j)) = -rows.N.row(active[j]).transpose();
    }
    return Nact;
  };

  auto drop = [&](std::size_t k) {
    is_active[static_cast<std::size_t>(active[k])] = 0;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
    u.erase(u.begin() + static_cast<std::ptrdiff_t>(k));
  };

  for (;;) {
    Eigen::Index pick = -1;
    double worst = opt.enter_tol;
    const bool bland = pivots > bland_after;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (is_active[static_cast<std::size_t>(i)]) { continue; }
      const double v = violation(i);
      if (v > worst) {
        pick = i;
        worst = v;
        if (bland) { break; }
      }
    }
    if (pick < 0) { break; }

    const Vector cp = -rows.N.row(pick).transpose();
    const double ep = -rows.d(pick);
    double up = 0.0;

    for (;;) {
      if (++pivots > budget) {
        throw NumericalFailure("solve_qp: pivot budget of " + std::to_string(budget) + " exhausted");
      }
      const Vector Hcp = Hinv * cp;
      const Matrix Nact = active_normals();
      Vector z = Hcp;
      Vector r;
      if (!active.empty()) {
        const Matrix HN = Hinv * Nact;
        const Matrix M = Nact.transpose() * HN;
        Eigen::LLT<Matrix> mllt(M);
        if (mllt.info() == Eigen::Success) {
          r = mllt.solve(Nact.transpose() * Hcp);
        } else {
          r = M.completeOrthogonalDecomposition().solve(Nact.transpose() * Hcp);
        }
        z -= HN * r;
      }

      double t1 = kInf;
      std::size_t k = 0;
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double rj = r(static_cast<Eigen::Index>(j));
        if (rj > 1e-14 * (1.0 + r.lpNorm<Eigen::Infinity>())) {
          const double ratio = u[j] / rj;
          if (ratio < t1) {
            t1 = ratio;
            k = j;
          }
        }
      }

      const double zc = z.dot(cp);
      const double sp = cp.dot(x) - ep;
      double t2 = kInf;
      if (zc > 1e-13 * cp.dot(Hcp)) { t2 = std::max(-sp / zc, 0.0); }

      if (!std::isfinite(t1) && !std::isfinite(t2)) {
        throw InfeasibleError("solve_qp: constraints are infeasible (row " + std::to_string(pick) + ")");
      }
      if (!std::isfinite(t2)) {
        for (std::size_t j = 0; j < active.size(); ++j) { u[j] -= t1 * r(static_cast<Eigen::Index>(j)); }
        up += t1;
        drop(k);
        continue;
      }
      const double t = std::min(t1, t2);
      x += t * z;
      for (std::size_t j = 0; j < active.size(); ++j) {
        u[j] = std::max(u[j] - t * r(static_cast<Eigen::Index>(j)), 0.0);
      }
      up += t;
      if (t2 <= t1) {
        active.push_back(pick);
        u.push_back(up);
        is_active[static_cast<std::size_t>(pick)] = 1;
        break;
      }
      drop(k);
    }
  }

  Vector lambda = Vector::Zero(m);
  for (std::size_t j = 0; j < active.size(); ++j) { lambda(active[j]) = u[j]; }

  // Polish on the final working set.
  if (!active.empty()) {
    const Matrix Nact = active_normals();
    Vector e(static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) { e(static_cast<Eigen::Index>(j)) = -rows.d(active[j]); }
    const Matrix HN = Hinv * Nact;
    const Matrix M = Nact.transpose() * HN;
    const Vector rhs = e + Nact.transpose() * (Hinv * p.c);
    Vector up = M.completeOrthogonalDecomposition().solve(rhs);
    Vector xp = -Hinv * p.c + HN * up;
    Vector lp = Vector::Zero(m);
    for (std::size_t j = 0; j < active.size(); ++j) { lp(active[j]) = std::max(up(static_cast<Eigen::Index>(j)), 0.0); }
    if (up.minCoeff() > -1e-9 * (1.0 + up.lpNorm<Eigen::Infinity>())
        && detail::qp_kkt_residual(p.H, p.c, rows, xp, lp) <= detail::qp_kkt_residual(p.H, p.c, rows, x, lambda)) {
      x = xp;
      lambda = lp;
    }
  }

  QpResult out;
  out.kkt_residual = detail::qp_kkt_residual(p.H, p.c, rows, x, lambda);
  out.objective = 0.5 * x.dot(p.H * x) + p.c.dot(x);
  out.x = std::move(x);
  out.multipliers = std::move(lambda);
  out.active = std::move(active);
  out.pivots = pivots;
  return out;
}

/**
 * @brief Euclidean projection onto X.
 *
 * Pure boxes are clamped componentwise; anything else is solved as a QP with H = I.
 */
inline Vector project(const Vector & x, const Polyhedron & X)
{
  detail::require_same(x.size(), X.dim(), "project");
  if (X.is_box()) { return x.cwiseMax(X.lower).cwiseMin(X.upper); }
  const Eigen::Index n = x.size();
  QpProblem qp{Matrix::Identity(n, n), -x, X};
  return solve_qp(qp).x;
}

/// Size guards for vertex enumeration.
inline constexpr Eigen::Index kMaxVertexDim = 6;
inline constexpr Eigen::Index kMaxVertexRows = 12;

/**
 * @brief All vertices of X intersected with the extra "<=" rows.
 *
 * Brute force over every n-subset of rows; intended for tiny instances only.
 * Vertices are returned sorted lexicographically, duplicates merged at 1e-8.
 */
inline std::vector<Vector> enumerate_vertices(const Polyhedron & X, const LinearRows & extra = {})
{
  const Eigen::Index n = X.dim();
  LinearRows rows = to_rows(X);
  if (extra.rows() > 0) {
    detail::require_same(extra.N.cols(), n, "enumerate_vertices extra rows");
    rows.append(extra);
  }
  const Eigen::Index m = rows.rows();
  if (n > kMaxVertexDim || m > kMaxVertexRows) {
    throw UnsupportedScale("enumerate_vertices: n=" + std::to_string(n) + ", rows=" + std::to_string(m)
                           + " exceeds the supported n<=6, rows<=12");
  }

  std::vector<Vector> out;
  if (n == 0 || m < n) { return out; }

  std::vector<Eigen::Index> pick(static_cast<std::size_t>(n));
  std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index depth, Eigen::Index start) {
    if (depth == n) {
      Matrix S(n, n);
      Vector rhs(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        S.row(j) = rows.N.row(pick[static_cast<std::size_t>(j)]);
        rhs(j) = rows.d(pick[static_cast<std::size_t>(j)]);
      }
      Eigen::FullPivLU<Matrix> lu(S);
      if (lu.rank() < n) { return; }
      Vector v = lu.solve(rhs);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (rows.N.row(i).dot(v) - rows.d(i) > kFeasTol * (1.0 + rows.N.row(i).norm())) { return; }
      }
      for (const auto & w : out) {
        if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-8) { return; }
      }
      out.push_back(std::move(v));
      return;
    }
    for (Eigen::Index i = start; i <= m - (n - depth); ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);

  std::sort(out.begin(), out.end(), [](const Vector & a, const Vector & b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return out;
}

}  // namespace ssqp
