#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <string>

#include "ssqp/errors.hpp"

/**
 * @file
 * @brief Scalar smoothing kernel for max{t, 0} and the calculus of its q-th power.
 *
 * The kernel is
 * \f[
 *   \theta(t,\mu) = \begin{cases} t & t > \mu \\ t^2/(2\mu) + \mu/2 & 0 \le t \le \mu \\ \mu/2 & t < 0 \end{cases}
 * \f]
 * Both breakpoints t = 0 and t = mu evaluate through the middle branch.
 */

namespace ssqp {

/// Exponent and smoothing width of the scalar kernel.
template<std::floating_point T = double>
struct SmoothScalarParams
{
  T q{0.5};
  T mu{1};
};

namespace detail {

template<std::floating_point T>
inline void check_mu(T t, T mu)
{
  if (!std::isfinite(t)) { throw DomainError("smoothing kernel: non-finite argument t"); }
  if (!(mu > T(0)) || !std::isfinite(mu)) {
    throw DomainError("smoothing kernel: mu must be finite and > 0, got " + std::to_string(mu));
  }
}

template<std::floating_point T>
inline void check_q(T q)
{
  if (!(q > T(0) && q <= T(1))) {
    throw DomainError("smoothing kernel: q must lie in (0, 1], got " + std::to_string(q));
  }
}

}  // namespace detail

/// theta(t, mu); always >= mu/2.
template<std::floating_point T>
inline T theta(T t, T mu)
{
  detail::check_mu(t, mu);
  if (t > mu) { return t; }
  if (t >= T(0)) { return t * t / (T(2) * mu) + mu / T(2); }
  return mu / T(2);
}

/// theta(t, mu)^q.
template<std::floating_point T>
inline T theta_q(T t, T mu, T q)
{
  detail::check_q(q);
  return std::pow(theta(t, mu), q);
}

/// First derivative of theta^q with respect to t. Continuous everywhere.
template<std::floating_point T>
inline T theta_q_d1(T t, T mu, T q)
{
  detail::check_mu(t, mu);
  detail::check_q(q);
  if (t > mu) { return q * std::pow(t, q - T(1)); }
  if (t >= T(0)) { return q * std::pow(theta(t, mu), q - T(1)) * t / mu; }
  return T(0);
}

/**
 * @brief Classical second derivative of theta^q.
 *
 * Returns std::nullopt at the two breakpoints t = 0 and t = mu where it does not exist.
 */
template<std::floating_point T>
inline std::optional<T> theta_q_d2(T t, T mu, T q)
{
  detail::check_mu(t, mu);
  detail::check_q(q);
  if (t == T(0) || t == mu) { return std::nullopt; }
  if (t > mu) { return q * (q - T(1)) * std::pow(t, q - T(2)); }
  if (t > T(0)) {
    const T th = theta(t, mu);
    return q * (q - T(1)) * std::pow(th, q - T(2)) * t * t / (mu * mu) + q * std::pow(th, q - T(1)) / mu;
  }
  return T(0);
}

/// Curvature cap: 4 q mu^(q-2) on the closed band [-mu, 2 mu], zero outside.
template<std::floating_point T>
inline T kappa(T t, T mu, T q)
{
  detail::check_mu(t, mu);
  detail::check_q(q);
  if (t >= -mu && t <= T(2) * mu) { return T(4) * q * std::pow(mu, q - T(2)); }
  return T(0);
}

/// max{t, 0}^q, the unsmoothed term.
template<std::floating_point T>
inline T plus_pow(T t, T q)
{
  return t > T(0) ? std::pow(t, q) : T(0);
}

}  // namespace ssqp
