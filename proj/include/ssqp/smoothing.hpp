#pragma once

#include <Eigen/Dense>

#include "ssqp/problem.hpp"
#include "ssqp/scalar.hpp"

namespace ssqp {

/// F(x) = sum_m max{(b - A x)_m, 0}^q + h(x).
inline double objective_F(const ProblemSpec & p, const Vector & x)
{
  const Vector r = p.residual(x);
  double f = 0.0;
  for (Eigen::Index m = 0; m < r.size(); ++m) { f += plus_pow(r(m), p.q); }
  return f + p.h_value(x);
}

/// Smoothed objective F~(x, mu) = sum_m theta^q((b - A x)_m, mu) + h(x).
inline double objective_F_tilde(const ProblemSpec & p, const Vector & x, double mu)
{
  const Vector r = p.residual(x);
  double f = 0.0;
  for (Eigen::Index m = 0; m < r.size(); ++m) { f += theta_q(r(m), mu, p.q); }
  return f + p.h_value(x);
}

/// Weights [theta^q]'(r_m, mu) of the smoothed residual terms.
inline Vector smoothed_weights(const ProblemSpec & p, const Vector & r, double mu)
{
  Vector w(r.size());
  for (Eigen::Index m = 0; m < r.size(); ++m) { w(m) = theta_q_d1(r(m), mu, p.q); }
  return w;
}

/// Gradient of F~: -A^T w + grad h(x).
inline Vector grad_F_tilde(const ProblemSpec & p, const Vector & x, double mu)
{
  const Vector r = p.residual(x);
  return -p.A.transpose() * smoothed_weights(p, r, mu) + p.h_grad(x);
}

/// Problem paired with a fixed smoothing parameter.
class SmoothedObjective
{
public:
  SmoothedObjective(const ProblemSpec & problem, double mu) : problem_(&problem), mu_(mu)
  {
    if (!(mu > 0.0)) { throw DomainError("SmoothedObjective: mu must be > 0"); }
  }

  double mu() const { return mu_; }
  const ProblemSpec & problem() const { return *problem_; }

  double value(const Vector & x) const { return objective_F_tilde(*problem_, x, mu_); }
  Vector gradient(const Vector & x) const { return grad_F_tilde(*problem_, x, mu_); }

private:
  const ProblemSpec * problem_;
  double mu_;
};

}  // namespace ssqp
