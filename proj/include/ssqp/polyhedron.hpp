#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "ssqp/errors.hpp"

namespace ssqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute membership tolerance, scaled per row by 1 + ||row||.
inline constexpr double kFeasTol = 1e-9;

/**
 * @brief Polyhedral set { x : lower <= x <= upper, G x <= g }.
 *
 * Infinite bounds are allowed. Equalities are encoded as two opposite rows.
 */
struct Polyhedron
{
  Vector lower;
  Vector upper;
  Matrix G;
  Vector g;

  Polyhedron() = default;

  Polyhedron(Vector lo, Vector up, Matrix G_ = {}, Vector g_ = {})
      : lower(std::move(lo)), upper(std::move(up)), G(std::move(G_)), g(std::move(g_))
  {
    if (G.size() == 0) { G.resize(0, lower.size()); }
    if (g.size() == 0) { g.resize(G.rows()); }
    validate();
  }

  /// R^n.
  static Polyhedron free(Eigen::Index n)
  {
    return Polyhedron(Vector::Constant(n, -kInf), Vector::Constant(n, kInf));
  }

  /// Box [lo, up]^n.
  static Polyhedron box(Eigen::Index n, double lo, double up)
  {
    return Polyhedron(Vector::Constant(n, lo), Vector::Constant(n, up));
  }

  Eigen::Index dim() const { return lower.size(); }

  /// True when there are no general rows.
  bool is_box() const { return G.rows() == 0; }

  void validate() const
  {
    detail::require_same(lower.size(), upper.size(), "Polyhedron bounds");
    detail::require_same(G.rows(), g.size(), "Polyhedron rows");
    if (G.rows() > 0) { detail::require_same(G.cols(), lower.size(), "Polyhedron G columns"); }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i)) {
        throw PreconditionError("Polyhedron: lower bound exceeds upper bound at coordinate " + std::to_string(i));
      }
    }
  }

  /// Largest scaled violation; <= 0 means feasible.
  double max_violation(const Vector & x) const
  {
    detail::require_same(x.size(), dim(), "Polyhedron membership");
    double worst = -kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::isfinite(lower(i))) { worst = std::max(worst, (lower(i) - x(i)) / 2.0); }
      if (std::isfinite(upper(i))) { worst = std::max(worst, (x(i) - upper(i)) / 2.0); }
    }
    for (Eigen::Index r = 0; r < G.rows(); ++r) {
      worst = std::max(worst, (G.row(r).dot(x) - g(r)) / (1.0 + G.row(r).norm()));
    }
    return worst;
  }

  bool contains(const Vector & x, double tol = kFeasTol) const { return max_violation(x) <= tol; }
};

/// Inequalities n_i^T x <= d_i in dense form.
struct LinearRows
{
  Matrix N;
  Vector d;

  Eigen::Index rows() const { return N.rows(); }

  void append(const Eigen::Ref<const Vector> & normal, double rhs)
  {
    const Eigen::Index r = N.rows();
    N.conservativeResize(r + 1, normal.size());
    d.conservativeResize(r + 1);
    N.row(r) = normal.transpose();
    d(r) = rhs;
  }

  void append(const LinearRows & other)
  {
    if (other.rows() == 0) { return; }
    const Eigen::Index r = N.rows();
    N.conservativeResize(r + other.rows(), other.N.cols());
    d.conservativeResize(r + other.rows());
    N.bottomRows(other.rows()) = other.N;
    d.tail(other.rows()) = other.d;
  }
};

/// All finite bounds and general rows of X as "<=" rows (upper bounds, then lower bounds, then G).
inline LinearRows to_rows(const Polyhedron & X)
{
  const Eigen::Index n = X.dim();
  LinearRows out;
  out.N.resize(0, n);
  out.d.resize(0);
  Vector e = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(X.upper(i))) {
      e.setZero();
      e(i) = 1.0;
      out.append(e, X.upper(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(X.lower(i))) {
      e.setZero();
      e(i) = -1.0;
      out.append(e, -X.lower(i));
    }
  }
  LinearRows general{X.G, X.g};
  out.append(general);
  return out;
}

}  // namespace ssqp
