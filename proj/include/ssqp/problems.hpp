#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/geometry.hpp"
#include "ssqp/smoothing.hpp"

/**
 * @file
 * @brief Instance constructors (SVM, power control, decoding, 3-partition, random) and small oracles.
 */

namespace ssqp {

/**
 * Soft-margin SVM: rows y_m [s_m; 1]^T, b = 1, h = rho/2 sum_{n<N} x_n^2 (bias unpenalized), X = R^N.
 */
inline ProblemSpec make_svm(const std::vector<Vector> & patterns, const std::vector<double> & labels, double rho, double q)
{
  if (patterns.empty()) { throw PreconditionError("make_svm: no patterns"); }
  detail::require_same(static_cast<long>(patterns.size()), static_cast<long>(labels.size()), "make_svm labels");
  if (!(rho >= 0.0)) { throw PreconditionError("make_svm: rho must be >= 0"); }
  const Eigen::Index dim = patterns.front().size();
  const Eigen::Index M = static_cast<Eigen::Index>(patterns.size());
  const Eigen::Index N = dim + 1;

  ProblemSpec p;
  p.q = q;
  p.A.resize(M, N);
  p.b = Vector::Ones(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto & s = patterns[static_cast<std::size_t>(m)];
    detail::require_same(s.size(), dim, "make_svm pattern");
    const double y = labels[static_cast<std::size_t>(m)];
    if (y != 1.0 && y != -1.0) { throw PreconditionError("make_svm: labels must be -1 or +1"); }
    p.A.row(m).head(dim) = y * s.transpose();
    p.A(m, dim) = y;
  }
  Matrix P = Matrix::Zero(N, N);
  P.diagonal().head(dim).setConstant(rho);
  p.h = QuadraticH{std::move(P), Vector::Zero(N), rho};
  p.X = Polyhedron::free(N);
  p.x0 = Vector::Zero(N);
  p.validate();
  return p;
}

/**
 * Joint power and admission control in normalized form: a_kk = 1, a_kj = -g_kj,
 * b = noise, h = rho e^T x, X = [0, 1]^K.
 */
inline ProblemSpec make_power_control(const Matrix & gains, const Vector & noise, double rho, double q)
{
  const Eigen::Index K = gains.rows();
  detail::require_same(gains.cols(), K, "make_power_control gains");
  detail::require_same(noise.size(), K, "make_power_control noise");
  if ((gains.array() < 0.0).any()) { throw PreconditionError("make_power_control: gains must be >= 0"); }
  for (Eigen::Index k = 0; k < K; ++k) {
    if (gains(k, k) != 1.0) { throw PreconditionError("make_power_control: gains must have unit diagonal"); }
  }
  if ((noise.array() <= 0.0).any()) { throw PreconditionError("make_power_control: noise must be > 0"); }
  if (!(rho > 0.0)) { throw PreconditionError("make_power_control: rho must be > 0"); }

  ProblemSpec p;
  p.q = q;
  p.A = -gains;
  p.A.diagonal().setOnes();
  p.b = noise;
  p.h = LinearH{Vector::Constant(K, rho)};
  p.X = Polyhedron::box(K, 0.0, 1.0);
  p.x0 = Vector::Ones(K);
  p.validate();
  return p;
}

/// Linear decoding: A = [C; -C], b = [c; -c], h = 0, X = R^N.
inline ProblemSpec make_decoding(const Matrix & C, const Vector & c, double q)
{
  detail::require_same(c.size(), C.rows(), "make_decoding");
  const Eigen::Index K1 = C.rows();
  ProblemSpec p;
  p.q = q;
  p.A.resize(2 * K1, C.cols());
  p.A.topRows(K1) = C;
  p.A.bottomRows(K1) = -C;
  p.b.resize(2 * K1);
  p.b.head(K1) = c;
  p.b.tail(K1) = -c;
  p.X = Polyhedron::free(C.cols());
  p.x0 = Vector::Zero(C.cols());
  p.validate();
  return p;
}

namespace detail {

inline void check_three_partition(const std::vector<long> & a, long B)
{
  if (a.empty() || a.size() % 3 != 0) { throw PreconditionError("3-partition: need 3m integers"); }
  if (B <= 0) { throw PreconditionError("3-partition: B must be positive"); }
  const long m = static_cast<long>(a.size() / 3);
  long sum = 0;
  for (const long ai : a) {
    // B/4 < a_i < B/2 in integers: 4 a_i > B and 2 a_i < B.
    if (!(4 * ai > B && 2 * ai < B)) {
      throw PreconditionError(
        "3-partition: a_i = " + std::to_string(ai) + " outside (B/4, B/2) for B = " + std::to_string(B));
    }
    sum += ai;
  }
  if (sum != m * B) {
    throw PreconditionError("3-partition: sum " + std::to_string(sum) + " != m B = " + std::to_string(m * B));
  }
}

}  // namespace detail

/// Variable index of x_ij (item i, bin j) in the 3-partition instance.
inline Eigen::Index three_partition_var(long i, long j, long m) { return static_cast<Eigen::Index>(i * m + j); }

/**
 * @brief Unconstrained instance whose optimal value is 3 m^2 iff the 3-partition instance is a yes.
 *
 * Variables x_ij, i < 3m, j < m. Rows, in order:
 *  - 2 per variable: max{x_ij, 0}^q and max{1 - x_ij, 0}^q,
 *  - one per item:   max{sum_j x_ij - 1, 0}^q,
 *  - one per bin:    max{B - sum_i a_i x_ij, 0}^q.
 * That is N = 3m^2 and M = 6m^2 + 4m rows.
 */
inline ProblemSpec make_three_partition(const std::vector<long> & a, long B, double q = 0.5)
{
  detail::check_three_partition(a, B);
  const long m = static_cast<long>(a.size() / 3);
  const Eigen::Index N = 3 * m * m;
  const Eigen::Index M = 6 * m * m + 4 * m;

  ProblemSpec p;
  p.q = q;
  p.A = Matrix::Zero(M, N);
  p.b = Vector::Zero(M);
  Eigen::Index row = 0;
  for (long i = 0; i < 3 * m; ++i) {
    for (long j = 0; j < m; ++j) {
      const Eigen::Index v = three_partition_var(i, j, m);
      p.A(row, v) = -1.0;  // b - a^T x = x_ij
      p.b(row) = 0.0;
      ++row;
      p.A(row, v) = 1.0;  // b - a^T x = 1 - x_ij
      p.b(row) = 1.0;
      ++row;
    }
  }
  for (long i = 0; i < 3 * m; ++i) {
    for (long j = 0; j < m; ++j) { p.A(row, three_partition_var(i, j, m)) = -1.0; }
    p.b(row) = -1.0;
    ++row;
  }
  for (long j = 0; j < m; ++j) {
    for (long i = 0; i < 3 * m; ++i) { p.A(row, three_partition_var(i, j, m)) = static_cast<double>(a[static_cast<std::size_t>(i)]); }
    p.b(row) = static_cast<double>(B);
    ++row;
  }
  p.X = Polyhedron::free(N);
  p.x0 = Vector::Zero(N);
  p.validate();
  return p;
}

/// Exhaustive search over all m^(3m) item-to-bin assignments; m <= 3.
inline bool brute_force_three_partition(const std::vector<long> & a, long m, long B)
{
  detail::check_three_partition(a, B);
  if (static_cast<long>(a.size()) != 3 * m) { throw PreconditionError("3-partition: |a| != 3m"); }
  if (m > 3) { throw UnsupportedScale("brute_force_three_partition: m <= 3 supported"); }
  const std::size_t n = a.size();
  std::vector<long> bin(n, 0);
  std::vector<long> load(static_cast<std::size_t>(m), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) {
      for (const long l : load) {
        if (l != B) { return false; }
      }
      return true;
    }
    for (long j = 0; j < m; ++j) {
      load[static_cast<std::size_t>(j)] += a[i];
      const bool ok = rec(i + 1);
      load[static_cast<std::size_t>(j)] -= a[i];
      if (ok) { return true; }
    }
    return false;
  };
  return rec(0);
}

enum class HKind { zero, linear, quadratic };
enum class XKind { box, simplex };

inline HKind parse_h_kind(std::string_view s)
{
  if (s == "zero") { return HKind::zero; }
  if (s == "linear") { return HKind::linear; }
  if (s == "quadratic") { return HKind::quadratic; }
  throw PreconditionError("unknown h kind '" + std::string(s) + "'");
}

inline XKind parse_x_kind(std::string_view s)
{
  if (s == "box") { return XKind::box; }
  if (s == "simplex") { return XKind::simplex; }
  throw PreconditionError("unknown X kind '" + std::string(s) + "'");
}

/**
 * @brief Seeded random instance.
 *
 * A has N(0, 1/N) entries. X is [0, 1]^N, optionally with the simplex row sum x <= 1.
 * b = A z + delta at a random feasible z, with delta alternating in sign so about half
 * the rows have a positive residual there. Linear and quadratic h use c >= 0 and PSD P,
 * so h >= 0 on X. x0 is a second random feasible point.
 */
inline ProblemSpec make_random(std::uint64_t seed, Eigen::Index N, Eigen::Index M, double q, HKind hk, XKind xk)
{
  if (N <= 0 || M <= 0) { throw PreconditionError("make_random: dimensions must be positive"); }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto feasible_point = [&]() {
    Vector z(N);
    if (xk == XKind::box) {
      for (Eigen::Index i = 0; i < N; ++i) { z(i) = unif(rng); }
    } else {
      for (Eigen::Index i = 0; i < N; ++i) { z(i) = -std::log(1.0 - unif(rng)); }
      z *= unif(rng) / z.sum();
    }
    return z;
  };

  ProblemSpec p;
  p.q = q;
  p.A.resize(M, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index n = 0; n < N; ++n) { p.A(m, n) = scale * normal(rng); }
  }
  const Vector z = feasible_point();
  p.b = p.A * z;
  for (Eigen::Index m = 0; m < M; ++m) {
    const double mag = 0.05 + 0.5 * unif(rng);
    p.b(m) += (m % 2 == 0) ? mag : -mag;
  }

  switch (hk) {
    case HKind::zero: p.h = ZeroH{}; break;
    case HKind::linear: {
      Vector c(N);
      for (Eigen::Index i = 0; i < N; ++i) { c(i) = 0.1 * unif(rng); }
      p.h = LinearH{std::move(c)};
      break;
    }
    case HKind::quadratic: {
      Matrix R(N, N);
      for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) { R(i, j) = scale * normal(rng); }
      }
      Matrix P = R.transpose() * R;
      P = 0.5 * (P + P.transpose());
      Vector c(N);
      for (Eigen::Index i = 0; i < N; ++i) { c(i) = 0.1 * unif(rng); }
      p.h = make_quadratic_h(std::move(P), std::move(c));
      break;
    }
  }

  if (xk == XKind::box) {
    p.X = Polyhedron::box(N, 0.0, 1.0);
  } else {
    p.X = Polyhedron(Vector::Zero(N), Vector::Ones(N), Matrix::Ones(1, N), Vector::Ones(1));
  }
  p.x0 = feasible_point();
  p.validate();
  return p;
}

/// Minimum of h over `samples` random points of the bounding box of X that lie in X.
inline double sampled_min_h(const ProblemSpec & p, int samples, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double best = kInf;
  for (int s = 0; s < samples; ++s) {
    Vector x(p.dim());
    for (Eigen::Index i = 0; i < p.dim(); ++i) {
      const double lo = std::isfinite(p.X.lower(i)) ? p.X.lower(i) : -10.0;
      const double hi = std::isfinite(p.X.upper(i)) ? p.X.upper(i) : 10.0;
      x(i) = lo + (hi - lo) * unif(rng);
    }
    if (p.X.contains(x)) { best = std::min(best, p.h_value(x)); }
  }
  return best;
}

/**
 * @brief Largest set of links that can be supported simultaneously.
 *
 * For each subset S of rows checks whether { x in X : (b - A x)_S <= 0 } is nonempty via
 * vertex enumeration (X is a bounded box here, so nonempty iff it has a vertex).
 */
inline int max_admissible_links(const ProblemSpec & p)
{
  const Eigen::Index K = p.rows();
  if (K > 4) { throw UnsupportedScale("max_admissible_links: at most 4 links"); }
  int best = 0;
  for (unsigned long mask = 0; mask < (1ul << K); ++mask) {
    const int count = std::popcount(mask);
    if (count <= best) { continue; }
    LinearRows rows;
    rows.N.resize(0, p.dim());
    rows.d.resize(0);
    for (Eigen::Index k = 0; k < K; ++k) {
      if ((mask >> k) & 1ul) { rows.append(-p.A.row(k).transpose(), -p.b(k)); }
    }
    if (!enumerate_vertices(p.X, rows).empty()) { best = count; }
  }
  return best;
}

}  // namespace ssqp
