#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ssqp/ssqp.hpp"

using namespace ssqp;

namespace {

Polyhedron simplex(Eigen::Index n)
{
  return Polyhedron(Vector::Zero(n), Vector::Constant(n, kInf), Matrix::Ones(1, n), Vector::Ones(1));
}

Matrix random_spd(std::mt19937_64 & rng, Eigen::Index n)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) { R(i, j) = g(rng); }
  }
  return R.transpose() * R + 0.1 * Matrix::Identity(n, n);
}

}  // namespace

TEST(Polyhedron, RejectsInvertedBounds)
{
  EXPECT_THROW(Polyhedron(Vector::Ones(2), Vector::Zero(2)), PreconditionError);
  EXPECT_THROW(Polyhedron(Vector::Zero(2), Vector::Ones(3)), DimensionError);
}

TEST(Polyhedron, Membership)
{
  const Polyhedron S = simplex(3);
  EXPECT_TRUE(S.contains(Vector::Constant(3, 0.2)));
  EXPECT_FALSE(S.contains(Vector::Constant(3, 0.5)));
  EXPECT_FALSE(S.contains(-Vector::Ones(3)));
}

TEST(Projection, BoxIsClamp)
{
  const Polyhedron X = Polyhedron::box(3, 0.0, 1.0);
  Vector y(3);
  y << -1.0, 0.4, 4.0;
  EXPECT_TRUE(project(y, X).isApprox(oracle::clamp(y, X.lower, X.upper)));
  Vector one(1);
  one << 4.0;
  EXPECT_DOUBLE_EQ(project(one, Polyhedron::box(1, 0.0, 1.0))(0), 1.0);
}

TEST(Projection, SimplexMatchesDykstra)
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.5);
  const Polyhedron S = simplex(4);
  const LinearRows rows = to_rows(S);
  for (int s = 0; s < 50; ++s) {
    Vector y(4);
    for (int i = 0; i < 4; ++i) { y(i) = g(rng); }
    const Vector p = project(y, S);
    const Vector ref = oracle::dykstra(y, rows.N, rows.d);
    EXPECT_LE((p - ref).norm(), 1e-8);
    EXPECT_TRUE(S.contains(p));
    EXPECT_LE((project(p, S) - p).norm(), 1e-10);
    for (int k = 0; k < 20; ++k) {
      Vector z(4);
      for (int i = 0; i < 4; ++i) { z(i) = std::abs(g(rng)); }
      z /= (z.sum() + 1.0);
      EXPECT_LE((y - p).dot(z - p), 1e-9);
    }
  }
}

TEST(Projection, NonExpansive)
{
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 2.0);
  Matrix G(2, 3);
  G << 1, 2, -1, -1, 1, 1;
  const Polyhedron X(Vector::Constant(3, -1), Vector::Constant(3, 2), G, Vector::Ones(2));
  for (int s = 0; s < 100; ++s) {
    Vector a(3);
    Vector b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = g(rng);
      b(i) = g(rng);
    }
    EXPECT_LE((project(a, X) - project(b, X)).norm(), (a - b).norm() + 1e-9);
  }
}

TEST(QpSolver, UnconstrainedClosedForm)
{
  std::mt19937_64 rng(1);
  const Matrix H = random_spd(rng, 4);
  const Vector c = Vector::LinSpaced(4, -1.0, 2.0);
  const QpResult r = solve_qp({H, c, Polyhedron::free(4)});
  EXPECT_LE((r.x + H.ldlt().solve(c)).norm(), 1e-10);
}

TEST(QpSolver, MatchesActiveSetEnumeration)
{
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int s = 0; s < 200; ++s) {
    const Eigen::Index n = 2 + s % 3;
    const Matrix H = random_spd(rng, n);
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) { c(i) = 3.0 * g(rng); }
    Matrix G(3, n);
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) { G(i, j) = g(rng); }
    }
    const Vector gg = Vector::Constant(3, 0.5) + G * Vector::Constant(n, 0.1);
    const Polyhedron X(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0), G, gg);
    const LinearRows rows = to_rows(X);
    const auto ref = oracle::qp_by_active_sets(H, c, rows.N, rows.d);
    ASSERT_TRUE(ref.has_value());
    const QpResult r = solve_qp({H, c, X});
    EXPECT_LE((r.x - *ref).norm(), 1e-8) << "instance " << s;
    EXPECT_LE(r.kkt_residual, 1e-9 * (1 + c.norm()));
    EXPECT_GE(r.multipliers.minCoeff(), 0.0);
  }
}

TEST(QpSolver, DetectsInfeasibility)
{
  Matrix G(2, 1);
  G << 1, -1;
  Vector g(2);
  g << -1, -1;  // x <= -1 and x >= 1
  const Polyhedron X(Vector::Constant(1, -kInf), Vector::Constant(1, kInf), G, g);
  EXPECT_THROW(solve_qp({Matrix::Identity(1, 1), Vector::Zero(1), X}), InfeasibleError);
}

TEST(QpSolver, RejectsIndefiniteHessian)
{
  Matrix H = Matrix::Identity(2, 2);
  H(1, 1) = -1;
  EXPECT_THROW(solve_qp({H, Vector::Zero(2), Polyhedron::free(2)}), DomainError);
}

TEST(QpSolver, DegenerateVertexTerminates)
{
  // Four constraints active at the origin in 2-D.
  Matrix G(4, 2);
  G << -1, 0, 0, -1, -1, -1, -2, -1;
  const Polyhedron X(Vector::Constant(2, -kInf), Vector::Constant(2, kInf), G, Vector::Zero(4));
  const QpResult r = solve_qp({Matrix::Identity(2, 2), Vector::Ones(2), X});
  EXPECT_LE(r.x.norm(), 1e-10);
}

TEST(Vertices, UnitSquare)
{
  const auto v = enumerate_vertices(Polyhedron::box(2, 0.0, 1.0));
  ASSERT_EQ(v.size(), 4u);
  EXPECT_TRUE(v.front().isZero());
  EXPECT_TRUE(v.back().isApprox(Vector::Ones(2)));
}

TEST(Vertices, SimplexInCube)
{
  LinearRows extra;
  extra.append(Vector::Ones(3), 1.0);
  EXPECT_EQ(enumerate_vertices(Polyhedron::box(3, 0.0, 1.0), extra).size(), 4u);
}

TEST(Vertices, ScaleGuard)
{
  EXPECT_THROW(enumerate_vertices(Polyhedron::box(7, 0.0, 1.0)), UnsupportedScale);
}
