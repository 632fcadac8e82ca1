#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "ssqp/geometry.hpp"
#include "ssqp/smoothing.hpp"
#include "ssqp/subproblems.hpp"

/**
 * @file
 * @brief KKT and epsilon-KKT certificates, plus the residual lower-bound constant.
 *
 * With residuals r = b - A x and a threshold tau, rows split into
 * I = {r < -tau}, J = {r > tau}, K = {|r| <= tau}. For a point x and multipliers
 * lambda >= 0 on K the certificate checks
 *   |lambda_m r_m| <= eps^q on K   and   || x - P_X(x - grad L(x, lambda)) || <= eps,
 * where grad L = -sum_J q r_m^(q-1) a_m + grad h(x) - sum_K lambda_m a_m.
 */

namespace ssqp {

/// Slack added to both certificate thresholds.
inline constexpr double kKktSlack = 1e-9;

struct IndexSets
{
  std::vector<Eigen::Index> I;
  std::vector<Eigen::Index> J;
  std::vector<Eigen::Index> K;
  double tau = 0.0;
};

inline IndexSets index_sets(const ProblemSpec & p, const Vector & x, double tau)
{
  if (!(tau >= 0.0)) { throw DomainError("index_sets: tau must be >= 0"); }
  const Vector r = p.residual(x);
  IndexSets s;
  s.tau = tau;
  for (Eigen::Index m = 0; m < r.size(); ++m) {
    if (r(m) < -tau) {
      s.I.push_back(m);
    } else if (r(m) > tau) {
      s.J.push_back(m);
    } else {
      s.K.push_back(m);
    }
  }
  return s;
}

/// lambda_m = [theta^q]'(r_m, eps) for m in K^eps, in the order of IndexSets::K.
inline Vector build_multipliers(const ProblemSpec & p, const Vector & x, double epsilon)
{
  if (!(epsilon > 0.0)) { throw DomainError("build_multipliers: epsilon must be > 0"); }
  const IndexSets s = index_sets(p, x, epsilon);
  const Vector r = p.residual(x);
  Vector lambda(static_cast<Eigen::Index>(s.K.size()));
  for (std::size_t j = 0; j < s.K.size(); ++j) {
    lambda(static_cast<Eigen::Index>(j)) = theta_q_d1(r(s.K[j]), epsilon, p.q);
  }
  return lambda;
}

/// Gradient of the restricted Lagrangian for given sets and multipliers on K.
inline Vector lagrangian_gradient(const ProblemSpec & p, const Vector & x, const IndexSets & s, const Vector & lambda)
{
  detail::require_same(lambda.size(), static_cast<long>(s.K.size()), "lagrangian_gradient multipliers");
  const Vector r = p.residual(x);
  Vector g = p.h_grad(x);
  for (const auto m : s.J) { g -= p.q * std::pow(r(m), p.q - 1.0) * p.A.row(m).transpose(); }
  for (std::size_t j = 0; j < s.K.size(); ++j) {
    g -= lambda(static_cast<Eigen::Index>(j)) * p.A.row(s.K[j]).transpose();
  }
  return g;
}

struct KktReport
{
  IndexSets sets;
  Vector multipliers;
  double complementarity_max = 0.0;
  double projected_residual = 0.0;
  double epsilon = 0.0;
  bool pass = false;
};

/**
 * @brief epsilon-KKT certificate using the constructed multipliers as witness.
 *
 * A failing report means this witness does not certify x; it does not prove that
 * no other multiplier vector would.
 */
inline KktReport eps_kkt_check(const ProblemSpec & p, const Vector & x, double epsilon)
{
  if (!(epsilon > 0.0)) { throw DomainError("eps_kkt_check: epsilon must be > 0"); }
  detail::require_same(x.size(), p.dim(), "eps_kkt_check");
  if (!p.X.contains(x)) { throw PreconditionError("eps_kkt_check: point is not in X"); }

  KktReport rep;
  rep.epsilon = epsilon;
  rep.sets = index_sets(p, x, epsilon);
  rep.multipliers = build_multipliers(p, x, epsilon);
  const Vector r = p.residual(x);
  for (std::size_t j = 0; j < rep.sets.K.size(); ++j) {
    rep.complementarity_max =
      std::max(rep.complementarity_max, std::abs(rep.multipliers(static_cast<Eigen::Index>(j)) * r(rep.sets.K[j])));
  }
  const Vector gL = lagrangian_gradient(p, x, rep.sets, rep.multipliers);
  rep.projected_residual = (x - project(x - gL, p.X)).norm();
  rep.pass = rep.projected_residual <= epsilon + kKktSlack
             && rep.complementarity_max <= std::pow(epsilon, p.q) + kKktSlack;
  return rep;
}

struct ClarkeReport
{
  double residual = 0.0;
  double mu = 0.0;
  double epsilon = 0.0;
  bool pass = false;
};

/// q = 1 only: ||P_X(x - grad F~(x, mu)) - x|| <= eps and mu <= eps.
inline ClarkeReport clarke_kkt_check(const ProblemSpec & p, const Vector & x, double mu, double epsilon)
{
  if (p.q != 1.0) { throw Unsupported("clarke_kkt_check: requires q = 1"); }
  detail::require_same(x.size(), p.dim(), "clarke_kkt_check");
  ClarkeReport rep;
  rep.mu = mu;
  rep.epsilon = epsilon;
  rep.residual = residual_direction(p, x, mu).norm();
  rep.pass = rep.residual <= epsilon + kKktSlack && mu <= epsilon;
  return rep;
}

/// Throws unless h is concave (zero, linear, or quadratic with negative semidefinite P).
inline void require_concave_h(const ProblemSpec & p)
{
  if (const auto * qh = std::get_if<QuadraticH>(&p.h)) {
    if (qh->P.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(qh->P, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().maxCoeff() > 1e-12 * (1.0 + qh->P.lpNorm<Eigen::Infinity>())) {
        throw PreconditionError("lower_bound_constant: quadratic h is not concave");
      }
    }
  }
}

/**
 * @brief Positive constant C with: at every local minimizer each residual is <= 0 or >= C.
 *
 * Enumerates the vertices of { x in X : (b - A x)_m <= 0 off J, (b - A x)_J >= 0 } for every
 * subset J of rows (I and K produce the same polytope, so only J needs enumerating) and takes the
 * smallest strictly positive J residual. Returns +inf when no vertex qualifies.
 */
inline double lower_bound_constant(const ProblemSpec & p)
{
  p.validate();
  require_concave_h(p);
  const Eigen::Index M = p.rows();
  if (M > 20) { throw UnsupportedScale("lower_bound_constant: too many rows"); }
  double C = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 1; mask < (1ul << M); ++mask) {
    LinearRows extra;
    extra.N.resize(M, p.dim());
    extra.d.resize(M);
    for (Eigen::Index m = 0; m < M; ++m) {
      const bool inJ = (mask >> m) & 1ul;
      const double sign = inJ ? 1.0 : -1.0;
      extra.N.row(m) = sign * p.A.row(m);
      extra.d(m) = sign * p.b(m);
    }
    for (const Vector & v : enumerate_vertices(p.X, extra)) {
      const Vector r = p.residual(v);
      double least = std::numeric_limits<double>::infinity();
      bool qualifies = true;
      for (Eigen::Index m = 0; m < M; ++m) {
        if (!((mask >> m) & 1ul)) { continue; }
        if (r(m) <= 1e-9 * (1.0 + std::abs(p.b(m)))) {
          qualifies = false;
          break;
        }
        least = std::min(least, r(m));
      }
      if (qualifies) { C = std::min(C, least); }
    }
  }
  return C;
}

/**
 * @brief Moves x to the nearest point of the face it approximately lies on.
 *
 * Rows with |r_m| <= tau are forced to r_m = 0 and constraints of X with scaled slack
 * <= tau are forced active; the correction is the minimum-norm solution of the
 * resulting equality system. Used to refine approximate stationary points onto the
 * exact (tau = 0) index sets before checking residual dichotomies.
 */
inline Vector polish_to_active_face(const ProblemSpec & p, const Vector & x, double tau)
{
  detail::require_same(x.size(), p.dim(), "polish_to_active_face");
  LinearRows eq;
  eq.N.resize(0, p.dim());
  eq.d.resize(0);
  const Vector r = p.residual(x);
  for (Eigen::Index m = 0; m < r.size(); ++m) {
    if (std::abs(r(m)) <= tau) { eq.append(p.A.row(m).transpose(), p.b(m)); }
  }
  const LinearRows xr = to_rows(p.X);
  for (Eigen::Index i = 0; i < xr.rows(); ++i) {
    const double nrm = xr.N.row(i).norm();
    if (xr.d(i) - xr.N.row(i).dot(x) <= tau * nrm) { eq.append(xr.N.row(i).transpose(), xr.d(i)); }
  }
  if (eq.rows() == 0) { return x; }
  const Vector defect = eq.d - eq.N * x;
  const Vector delta = eq.N.completeOrthogonalDecomposition().solve(defect);
  return x + delta;
}

}  // namespace ssqp
