#pragma once

#include <Eigen/Dense>

#include "ssqp/smoothing.hpp"

namespace ssqp {

/// B~(x, mu) = sum_m kappa((b - A x)_m, mu) a_m a_m^T.
inline Matrix build_B_tilde(const ProblemSpec & p, const Vector & x, double mu)
{
  const Vector r = p.residual(x);
  Vector k(r.size());
  for (Eigen::Index m = 0; m < r.size(); ++m) { k(m) = kappa(r(m), mu, p.q); }
  return p.A.transpose() * k.asDiagonal() * p.A;
}

/**
 * @brief Convex quadratic majorant of F~(., mu) around a center x_k:
 * \f[
 *   Q(x) = F^\sim(x_k,\mu) + g^T (x - x_k) + \tfrac12 (x - x_k)^T (\tilde B + L I)(x - x_k).
 * \f]
 * It upper-bounds F~ on the trust region whenever h(x) <= h(x_k) + grad h(x_k)^T (x - x_k) + L/2 ||x - x_k||^2.
 */
struct QuadraticModel
{
  Vector center;
  Vector gradient;
  Matrix curvature;
  double constant = 0.0;
  double mu = 1.0;
  double lipschitz = 0.0;
};

inline QuadraticModel build_model(const ProblemSpec & p, const Vector & xk, double mu, double L)
{
  if (!(L >= 0.0)) { throw DomainError("build_model: L must be >= 0"); }
  QuadraticModel m;
  m.center = xk;
  m.gradient = grad_F_tilde(p, xk, mu);
  m.curvature = build_B_tilde(p, xk, mu);
  m.curvature.diagonal().array() += L;
  m.constant = objective_F_tilde(p, xk, mu);
  m.mu = mu;
  m.lipschitz = L;
  return m;
}

inline double eval_Q(const Vector & x, const QuadraticModel & model)
{
  detail::require_same(x.size(), model.center.size(), "eval_Q");
  const Vector s = x - model.center;
  return model.constant + model.gradient.dot(s) + 0.5 * s.dot(model.curvature * s);
}

/// Upper bound 4 q mu^(q-2) sum ||a_m||^2 on lambda_max(B~).
inline double B_tilde_eigen_cap(const ProblemSpec & p, double mu)
{
  return 4.0 * p.q * std::pow(mu, p.q - 2.0) * p.A.squaredNorm();
}

}  // namespace ssqp
