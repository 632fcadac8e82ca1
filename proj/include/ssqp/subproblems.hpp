#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/geometry.hpp"
#include "ssqp/model.hpp"

namespace ssqp {

enum class StepMode { proj, snorm, exact };

inline std::string_view to_string(StepMode m)
{
  switch (m) {
    case StepMode::proj: return "proj";
    case StepMode::snorm: return "snorm";
    case StepMode::exact: return "exact";
  }
  return "?";
}

inline StepMode parse_step_mode(std::string_view s)
{
  if (s == "proj") { return StepMode::proj; }
  if (s == "snorm") { return StepMode::snorm; }
  if (s == "exact") { return StepMode::exact; }
  throw PreconditionError("unknown step mode '" + std::string(s) + "' (expected proj|snorm|exact)");
}

struct StepResult
{
  Vector next;
  /// F~(x_k, mu) - F~(next, mu).
  double decrease = 0.0;
  /// ||d_k||.
  double residual_norm = 0.0;
  /// Model value Q(next); never above F~(x_k, mu).
  double model_value = 0.0;
  double tau = 0.0;
  /// Line-search factor, set in proj mode only.
  std::optional<double> xi;
  long qp_pivots = 0;
};

/// Rows far from the smoothing band: I = {r_m < -mu}, J = {r_m > 2 mu}. Zero-based.
struct TrustSets
{
  std::vector<Eigen::Index> I;
  std::vector<Eigen::Index> J;
};

inline TrustSets index_sets_mu(const ProblemSpec & p, const Vector & x, double mu)
{
  const Vector r = p.residual(x);
  TrustSets s;
  for (Eigen::Index m = 0; m < r.size(); ++m) {
    if (r(m) < -mu) { s.I.push_back(m); }
    if (r(m) > 2.0 * mu) { s.J.push_back(m); }
  }
  return s;
}

/// d = P_X(x - grad F~(x, mu)) - x.
inline Vector residual_direction(const ProblemSpec & p, const Vector & x, double mu)
{
  return project(x - grad_F_tilde(p, x, mu), p.X) - x;
}

/// Everything about the current iterate that does not depend on the Lipschitz estimate.
struct StepContext
{
  Vector xk;
  double mu = 1.0;
  Vector r;
  Vector grad;
  Vector d;
  double d_norm = 0.0;
  Matrix B;
  double F_tilde = 0.0;
  double max_row_norm = 0.0;
};

inline StepContext prepare_step(const ProblemSpec & p, const Vector & xk, double mu)
{
  if (!(mu > 0.0)) { throw DomainError("prepare_step: mu must be > 0"); }
  StepContext c;
  c.xk = xk;
  c.mu = mu;
  c.r = p.residual(xk);
  c.grad = grad_F_tilde(p, xk, mu);
  c.d = project(xk - c.grad, p.X) - xk;
  c.d_norm = c.d.norm();
  c.B = build_B_tilde(p, xk, mu);
  c.F_tilde = objective_F_tilde(p, xk, mu);
  c.max_row_norm = p.rows() > 0 ? p.row_norms().maxCoeff() : 0.0;
  return c;
}

namespace detail {

inline double model_at(const StepContext & c, double L, const Vector & s)
{
  return c.F_tilde + c.grad.dot(s) + 0.5 * (s.dot(c.B * s) + L * s.squaredNorm());
}

/// X shifted to the step variable s = x - x_k, with extra rows appended.
inline Polyhedron shifted_region(const ProblemSpec & p, const Vector & xk, const LinearRows & extra)
{
  const Eigen::Index n = p.dim();
  Matrix G(p.X.G.rows() + extra.rows(), n);
  Vector g(G.rows());
  if (p.X.G.rows() > 0) {
    G.topRows(p.X.G.rows()) = p.X.G;
    g.head(p.X.G.rows()) = p.X.g - p.X.G * xk;
  }
  if (extra.rows() > 0) {
    G.bottomRows(extra.rows()) = extra.N;
    g.tail(extra.rows()) = extra.d;
  }
  return Polyhedron(p.X.lower - xk, p.X.upper - xk, std::move(G), std::move(g));
}

inline StepResult qp_step(const ProblemSpec & p, const StepContext & c, double L, const LinearRows & trust)
{
  QpProblem qp;
  qp.H = c.B;
  qp.H.diagonal().array() += L;
  qp.c = c.grad;
  qp.constraints = shifted_region(p, c.xk, trust);
  const QpResult sol = solve_qp(qp);

  StepResult out;
  out.next = c.xk + sol.x;
  out.residual_norm = c.d_norm;
  out.model_value = model_at(c, L, sol.x);
  out.decrease = c.F_tilde - objective_F_tilde(p, out.next, c.mu);
  out.qp_pivots = sol.pivots;
  return out;
}

inline void check_step_preconditions(const StepContext & c, double L)
{
  if (!(L > 0.0)) { throw DomainError("step: Lipschitz estimate must be > 0"); }
  if (!(c.d_norm > c.mu)) {
    throw PreconditionError(
      "step: ||d_k|| = " + std::to_string(c.d_norm) + " <= mu = " + std::to_string(c.mu)
      + "; the inner loop should already have terminated");
  }
}

}  // namespace detail

/**
 * Shrink projection gradient step x_k + xi tau d_k.
 *
 * tau keeps every |(A(x - x_k))_m| <= mu; xi minimizes the model on the segment [0, 1].
 */
inline StepResult step_proj(const ProblemSpec & p, const StepContext & c, double L)
{
  detail::check_step_preconditions(c, L);
  const double tau = c.mu / ((c.max_row_norm + 1.0) * c.d_norm);
  const double slope = -c.d.dot(c.grad);
  const double curv = c.d.dot(c.B * c.d) + L * c.d.squaredNorm();
  const double xi = std::clamp(slope / (tau * curv), 0.0, 1.0);

  StepResult out;
  const Vector s = xi * tau * c.d;
  out.next = c.xk + s;
  out.tau = tau;
  out.xi = xi;
  out.residual_norm = c.d_norm;
  out.model_value = detail::model_at(c, L, s);
  out.decrease = c.F_tilde - objective_F_tilde(p, out.next, c.mu);
  return out;
}

/// Minimizes the model over X intersected with ||A (x - x_k)||_inf <= mu.
inline StepResult step_snorm(const ProblemSpec & p, const StepContext & c, double L)
{
  detail::check_step_preconditions(c, L);
  LinearRows trust;
  trust.N.resize(2 * p.rows(), p.dim());
  trust.d = Vector::Constant(2 * p.rows(), c.mu);
  trust.N.topRows(p.rows()) = p.A;
  trust.N.bottomRows(p.rows()) = -p.A;
  return detail::qp_step(p, c, L, trust);
}

/**
 * Minimizes the model over X with the one-sided trust rows
 * (A(x_k - x))_m <= mu on I and (A(x_k - x))_m >= -r_m / 2 on J.
 */
inline StepResult step_exact(const ProblemSpec & p, const StepContext & c, double L)
{
  detail::check_step_preconditions(c, L);
  LinearRows trust;
  trust.N.resize(0, p.dim());
  trust.d.resize(0);
  for (Eigen::Index m = 0; m < c.r.size(); ++m) {
    if (c.r(m) < -c.mu) { trust.append(-p.A.row(m).transpose(), c.mu); }
    if (c.r(m) > 2.0 * c.mu) { trust.append(p.A.row(m).transpose(), c.r(m) / 2.0); }
  }
  return detail::qp_step(p, c, L, trust);
}

inline StepResult compute_step(const ProblemSpec & p, const StepContext & c, StepMode mode, double L)
{
  switch (mode) {
    case StepMode::proj: return step_proj(p, c, L);
    case StepMode::snorm: return step_snorm(p, c, L);
    case StepMode::exact: return step_exact(p, c, L);
  }
  throw PreconditionError("compute_step: bad mode");
}

inline StepResult step_proj(const ProblemSpec & p, const Vector & xk, double mu, double L)
{
  return step_proj(p, prepare_step(p, xk, mu), L);
}

inline StepResult step_snorm(const ProblemSpec & p, const Vector & xk, double mu, double L)
{
  return step_snorm(p, prepare_step(p, xk, mu), L);
}

inline StepResult step_exact(const ProblemSpec & p, const Vector & xk, double mu, double L)
{
  return step_exact(p, prepare_step(p, xk, mu), L);
}

}  // namespace ssqp
