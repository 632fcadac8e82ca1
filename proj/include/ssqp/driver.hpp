#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/kkt.hpp"
#include "ssqp/subproblems.hpp"

namespace ssqp {

enum class LipschitzMode { known, adaptive };

inline std::string_view to_string(LipschitzMode m) { return m == LipschitzMode::known ? "known" : "adaptive"; }

inline LipschitzMode parse_lipschitz_mode(std::string_view s)
{
  if (s == "known") { return LipschitzMode::known; }
  if (s == "adaptive") { return LipschitzMode::adaptive; }
  throw PreconditionError("unknown lipschitz mode '" + std::string(s) + "' (expected known|adaptive)");
}

/// Smallest Lipschitz estimate used in known mode; zero and linear h declare L_h = 0.
inline constexpr double kLipschitzFloor = 1e-3;

/// Tolerance on the r_k <= 1 acceptance test.
inline constexpr double kRatioTol = 1e-10;

struct SolverConfig
{
  double epsilon = 0.1;
  double sigma = 0.5;
  double eta = 2.0;
  double L_min = 1e-3;
  double L_0 = 1.0;
  double L_max = 1e3;
  StepMode step_mode = StepMode::proj;
  LipschitzMode lipschitz_mode = LipschitzMode::known;
  /// 0 selects the default cap (10x the worst-case bound in known mode, 1e6 otherwise).
  std::uint64_t max_qp_solves = 0;
};

/// Lipschitz bounds actually used by a run.
struct LipschitzBounds
{
  double L_min;
  double L_0;
  double L_max;
};

inline LipschitzBounds effective_lipschitz(const ProblemSpec & p, const SolverConfig & cfg)
{
  if (cfg.lipschitz_mode == LipschitzMode::known) {
    const double L = std::max(p.h_lipschitz(), kLipschitzFloor);
    return {L, L, L};
  }
  return {cfg.L_min, cfg.L_0, cfg.L_max};
}

inline void validate(const SolverConfig & cfg)
{
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) {
    throw PreconditionError("SolverConfig: epsilon must lie in (0, 1], got " + std::to_string(cfg.epsilon));
  }
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) {
    throw PreconditionError("SolverConfig: sigma must lie in (0, 1), got " + std::to_string(cfg.sigma));
  }
  if (!(cfg.eta > 1.0)) { throw PreconditionError("SolverConfig: eta must be > 1"); }
  if (cfg.lipschitz_mode == LipschitzMode::adaptive
      && !(cfg.L_min > 0.0 && cfg.L_min <= cfg.L_0 && cfg.L_0 <= cfg.L_max)) {
    throw PreconditionError("SolverConfig: need 0 < L_min <= L_0 <= L_max");
  }
}

struct SmoothingSchedule
{
  double mu0;
  /// Index of the last outer iteration; mu0 * sigma^last == epsilon.
  int last;
};

/**
 * mu0 = eps / sigma^floor(log_sigma eps), so that mu0 lies in (sigma, 1] and the schedule
 * mu_i = mu0 sigma^i hits eps at i = floor(log_sigma eps). The floor is found by integer
 * search, which keeps eps = sigma^k on the right side of the boundary.
 */
inline SmoothingSchedule smoothing_schedule(double epsilon, double sigma)
{
  if (!(epsilon > 0.0 && epsilon <= 1.0)) { throw PreconditionError("mu0: epsilon must lie in (0, 1]"); }
  if (!(sigma > 0.0 && sigma < 1.0)) { throw PreconditionError("mu0: sigma must lie in (0, 1)"); }
  int k = 0;
  while (std::pow(sigma, k + 1) >= epsilon * (1.0 - 1e-14)) { ++k; }
  return {epsilon / std::pow(sigma, k), k};
}

inline double mu0(double epsilon, double sigma) { return smoothing_schedule(epsilon, sigma).mu0; }

inline double mu_at(const SmoothingSchedule & s, double sigma, int i)
{
  return s.mu0 * std::pow(sigma, i);
}

struct ComplexityConstants
{
  double K0 = 1;
  double J0 = 0;
  double Lbar = 0;
  double JTq = 0;
  double F0 = 0;
  /// J_T^q eps^(q-4) before rounding.
  double bound_real = 0;
  std::uint64_t bound = 0;

  /// ceil(F~(x0, 1) J0 mu^(q-4)): inner termination checks at a fixed mu.
  double inner_bound(double mu, double q) const { return std::ceil(F0 * J0 * std::pow(mu, q - 4.0)); }
};

inline std::uint64_t saturating_ceil(double v)
{
  constexpr double top = 1.8e19;
  if (!(v < top)) { return std::numeric_limits<std::uint64_t>::max(); }
  return static_cast<std::uint64_t>(std::ceil(v));
}

/**
 * @brief Worst-case constants K0, J0, Lbar, J_T^q and the total QP-solve bound.
 *
 * `lipschitz` is the true L_h; pass std::nullopt when it is unknown.
 */
inline ComplexityConstants complexity_constants(
  const ProblemSpec & p, const SolverConfig & cfg, const Vector & x0, std::optional<double> lipschitz)
{
  if (!lipschitz) { throw Unsupported("complexity_constants: L_h must be known"); }
  validate(cfg);
  const LipschitzBounds lb = effective_lipschitz(p, cfg);
  const double Lh = *lipschitz;
  const double q = p.q;

  ComplexityConstants c;
  const double logratio = Lh > 0.0 ? std::log(Lh / lb.L_min) / std::log(cfg.eta) : -kInf;
  // Guard against log(1) landing a hair above zero.
  const double steps = logratio > 1e-12 ? std::ceil(logratio - 1e-12) : 0.0;
  c.K0 = steps + 1.0;
  c.Lbar = std::max({lb.L_0, lb.L_max, cfg.eta * Lh});
  const double sum_sq = p.A.squaredNorm();
  const double amax = p.rows() > 0 ? p.row_norms().maxCoeff() : 0.0;
  c.J0 = std::max(8.0 * q * sum_sq + 2.0 * c.Lbar, 2.0 * amax + 2.0);
  c.F0 = objective_F_tilde(p, x0, 1.0);
  const double s = std::pow(cfg.sigma, q - 4.0);
  c.JTq = s * (c.F0 * c.J0 * c.K0 + 1.0) / (s - 1.0);
  c.bound_real = c.JTq * std::pow(cfg.epsilon, q - 4.0);
  c.bound = saturating_ceil(c.bound_real);
  return c;
}

inline ComplexityConstants complexity_constants(const ProblemSpec & p, const SolverConfig & cfg, const Vector & x0)
{
  return complexity_constants(p, cfg, x0, p.h_lipschitz());
}

/**
 * r_k = (h(x+) - h(x) - grad h(x)^T s) / (L/2 ||s||^2). Zero steps return 0.
 */
inline double ratio_rk(const ProblemSpec & p, const Vector & xk, const Vector & xnext, double L)
{
  if (!(L > 0.0)) { throw DomainError("ratio_rk: L must be > 0"); }
  const Vector s = xnext - xk;
  const double ss = s.squaredNorm();
  if (ss <= 1e-16 * (1.0 + xk.squaredNorm())) { return 0.0; }
  const double num = p.h_value(xnext) - p.h_value(xk) - p.h_grad(xk).dot(s);
  return num / (0.5 * L * ss);
}

/// One row per QP solve (rejected Lipschitz retries included).
struct TraceRow
{
  std::uint64_t qp_solve = 0;
  int outer_i = 0;
  std::uint64_t inner_k = 0;
  double mu = 0;
  /// F~ at the center x_k of the solved model.
  double F_tilde = 0;
  double decrease = 0;
  double residual_norm = 0;
  double r_k = 0;
  double L_hk = 0;
  bool accepted = false;
};

struct SolveResult
{
  Vector x_final;
  double mu_final = 0;
  std::uint64_t qp_solves = 0;
  std::uint64_t termination_checks = 0;
  int outer_iterations = 0;
  std::vector<TraceRow> trace;
  KktReport kkt;
  std::optional<ClarkeReport> clarke;
  ComplexityConstants constants;
  /// ceil(J_T^q eps^(q-4)).
  std::uint64_t bound = 0;
  /// ||P_X(x - grad F~(x, mu_final)) - x|| at exit.
  double final_residual = 0;
};

/**
 * @brief Two-level smoothing SQP loop.
 *
 * Outer loop: mu_i = mu0 sigma^i until mu = eps. Inner loop at fixed mu: stop when
 * ||d_k|| <= mu, otherwise take a step of the configured kind, accept it when the
 * curvature ratio r_k <= 1 (then reset the Lipschitz estimate from s^T y / s^T s, clamped),
 * or inflate the estimate by eta and re-solve.
 *
 * @throws BoundViolation if the QP-solve cap is exceeded.
 */
inline SolveResult solve(const ProblemSpec & p, const Vector & x_start, const SolverConfig & cfg)
{
  p.validate();
  validate(cfg);
  detail::require_same(x_start.size(), p.dim(), "solve x0");
  const LipschitzBounds lb = effective_lipschitz(p, cfg);
  if (cfg.lipschitz_mode == LipschitzMode::adaptive && lb.L_max < p.h_lipschitz()) {
    throw PreconditionError("SolverConfig: L_max must be >= the Lipschitz constant of grad h");
  }

  Vector x = p.X.contains(x_start) ? x_start : project(x_start, p.X);

  SolveResult out;
  out.constants = complexity_constants(p, cfg, x);
  out.bound = out.constants.bound;

  std::uint64_t cap = cfg.max_qp_solves;
  if (cap == 0) {
    if (cfg.lipschitz_mode == LipschitzMode::known) {
      cap = out.bound > std::numeric_limits<std::uint64_t>::max() / 10 ? std::numeric_limits<std::uint64_t>::max()
                                                                       : 10 * out.bound;
    } else {
      cap = 1000000;
    }
  }

  const SmoothingSchedule sched = smoothing_schedule(cfg.epsilon, cfg.sigma);
  double L = lb.L_0;
  double mu = sched.mu0;

  for (int i = 0; i <= sched.last; ++i) {
    mu = mu_at(sched, cfg.sigma, i);
    std::uint64_t k = 0;
    for (;;) {
      ++out.termination_checks;
      const StepContext ctx = prepare_step(p, x, mu);
      if (ctx.d_norm <= mu) { break; }

      for (;;) {
        if (out.qp_solves >= cap) {
          throw BoundViolation("solve: exceeded " + std::to_string(cap) + " QP solves");
        }
        StepResult step = compute_step(p, ctx, cfg.step_mode, L);
        ++out.qp_solves;
        const double rk = ratio_rk(p, x, step.next, L);

        TraceRow row;
        row.qp_solve = out.qp_solves;
        row.outer_i = i;
        row.inner_k = k;
        row.mu = mu;
        row.F_tilde = ctx.F_tilde;
        row.decrease = step.decrease;
        row.residual_norm = ctx.d_norm;
        row.r_k = rk;
        row.L_hk = L;
        row.accepted = rk <= 1.0 + kRatioTol;
        out.trace.push_back(row);

        if (row.accepted) {
          const Vector s = step.next - x;
          const double ss = s.squaredNorm();
          if (ss > 0.0) {
            const Vector y = p.h_grad(step.next) - p.h_grad(x);
            L = std::max(std::min(lb.L_max, s.dot(y) / ss), lb.L_min);
          }
          x = std::move(step.next);
          ++k;
          break;
        }
        L *= cfg.eta;
      }
    }
  }

  out.outer_iterations = sched.last + 1;
  out.mu_final = mu;
  out.x_final = x;
  out.final_residual = residual_direction(p, x, mu).norm();
  out.kkt = eps_kkt_check(p, x, cfg.epsilon);
  if (p.q == 1.0) { out.clarke = clarke_kkt_check(p, x, mu, cfg.epsilon); }
  return out;
}

}  // namespace ssqp
