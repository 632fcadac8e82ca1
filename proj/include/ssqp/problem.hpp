#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "ssqp/errors.hpp"
#include "ssqp/polyhedron.hpp"

namespace ssqp {

/// h = 0.
struct ZeroH
{};

/// h(x) = c^T x.
struct LinearH
{
  Vector c;
};

/// h(x) = 1/2 x^T P x + c^T x with gradient Lipschitz constant `lipschitz`.
struct QuadraticH
{
  Matrix P;
  Vector c;
  double lipschitz = 0.0;
};

using HSpec = std::variant<ZeroH, LinearH, QuadraticH>;

/// Spectral norm of a symmetric matrix, i.e. the Lipschitz constant of x -> P x.
inline double symmetric_spectral_norm(const Matrix & P)
{
  if (P.size() == 0) { return 0.0; }
  Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(P.rows() - 1)));
}

/**
 * @brief Problem data for  min ||max{b - A x, 0}||_q^q + h(x)  s.t.  x in X.
 */
struct ProblemSpec
{
  Matrix A;
  Vector b;
  double q = 0.5;
  HSpec h = ZeroH{};
  Polyhedron X;
  /// Optional suggested starting point.
  std::optional<Vector> x0;

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index dim() const { return A.cols(); }

  Vector residual(const Vector & x) const
  {
    detail::require_same(x.size(), dim(), "residual");
    return b - A * x;
  }

  double h_value(const Vector & x) const
  {
    return std::visit(
      [&](const auto & hh) -> double {
        using T = std::decay_t<decltype(hh)>;
        if constexpr (std::is_same_v<T, ZeroH>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, LinearH>) {
          return hh.c.dot(x);
        } else {
          return 0.5 * x.dot(hh.P * x) + hh.c.dot(x);
        }
      },
      h);
  }

  Vector h_grad(const Vector & x) const
  {
    return std::visit(
      [&](const auto & hh) -> Vector {
        using T = std::decay_t<decltype(hh)>;
        if constexpr (std::is_same_v<T, ZeroH>) {
          return Vector::Zero(x.size());
        } else if constexpr (std::is_same_v<T, LinearH>) {
          return hh.c;
        } else {
          return hh.P * x + hh.c;
        }
      },
      h);
  }

  /// Declared Lipschitz constant of grad h (0 for zero and linear h).
  double h_lipschitz() const
  {
    if (const auto * qh = std::get_if<QuadraticH>(&h)) { return qh->lipschitz; }
    return 0.0;
  }

  std::string h_kind() const
  {
    switch (h.index()) {
      case 0: return "zero";
      case 1: return "linear";
      default: return "quadratic";
    }
  }

  /// Euclidean norms of the rows a_m.
  Vector row_norms() const { return A.rowwise().norm(); }

  void validate() const
  {
    detail::require_same(b.size(), A.rows(), "ProblemSpec b");
    detail::require_same(X.dim(), A.cols(), "ProblemSpec X");
    X.validate();
    if (!(q > 0.0 && q <= 1.0)) { throw DomainError("ProblemSpec: q must lie in (0, 1]"); }
    if (!A.allFinite() || !b.allFinite()) { throw DomainError("ProblemSpec: A and b must be finite"); }
    if (x0) { detail::require_same(x0->size(), A.cols(), "ProblemSpec x0"); }
    std::visit(
      [&](const auto & hh) {
        using T = std::decay_t<decltype(hh)>;
        if constexpr (std::is_same_v<T, LinearH>) {
          detail::require_same(hh.c.size(), A.cols(), "linear h");
        } else if constexpr (std::is_same_v<T, QuadraticH>) {
          detail::require_same(hh.P.rows(), A.cols(), "quadratic h P rows");
          detail::require_same(hh.P.cols(), A.cols(), "quadratic h P cols");
          detail::require_same(hh.c.size(), A.cols(), "quadratic h c");
          if ((hh.P - hh.P.transpose()).template lpNorm<Eigen::Infinity>() > 1e-12 * (1.0 + hh.P.template lpNorm<Eigen::Infinity>())) {
            throw DomainError("quadratic h: P must be symmetric");
          }
          const double L = symmetric_spectral_norm(hh.P);
          if (std::abs(L - hh.lipschitz) > 1e-8 * std::max(1.0, L)) {
            throw PreconditionError(
              "quadratic h: declared lipschitz " + std::to_string(hh.lipschitz) + " differs from ||P|| = "
              + std::to_string(L));
          }
        }
      },
      h);
  }
};

/// Quadratic h with the Lipschitz constant filled in from P.
inline QuadraticH make_quadratic_h(Matrix P, Vector c)
{
  const double L = symmetric_spectral_norm(P);
  return QuadraticH{std::move(P), std::move(c), L};
}

}  // namespace ssqp
