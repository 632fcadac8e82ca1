#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ssqp/ssqp.hpp"

using namespace ssqp;

TEST(Svm, ShapeAndSeparableCase)
{
  const ProblemSpec p = make_svm({Vector::Constant(1, 2.0), Vector::Constant(1, -2.0)}, {1.0, -1.0}, 1.0, 0.5);
  EXPECT_EQ(p.rows(), 2);
  EXPECT_EQ(p.dim(), 2);
  Vector x(2);
  x << 1.0, 0.0;  // margins 2 >= 1
  EXPECT_DOUBLE_EQ(objective_F(p, x) - p.h_value(x), 0.0);
  EXPECT_DOUBLE_EQ(p.h_value(Vector::Ones(2)), 0.5);  // bias unpenalized
  EXPECT_DOUBLE_EQ(p.h_lipschitz(), 1.0);
}

TEST(Svm, RejectsBadLabel)
{
  EXPECT_THROW(make_svm({Vector::Ones(1)}, {0.5}, 1.0, 0.5), PreconditionError);
  EXPECT_THROW(make_svm({Vector::Ones(1), Vector::Ones(2)}, {1.0, 1.0}, 1.0, 0.5), DimensionError);
}

TEST(Power, Construction)
{
  Matrix G(3, 3);
  G << 1, 0.2, 0.1, 0.3, 1, 0.4, 0, 0.5, 1;
  const ProblemSpec p = make_power_control(G, Vector::Constant(3, 0.1), 0.01, 0.5);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(p.A(i, i), 1.0);
    for (Eigen::Index j = 0; j < 3; ++j) {
      if (i != j) { EXPECT_LE(p.A(i, j), 0.0); }
    }
  }
  EXPECT_TRUE(p.X.is_box());
  EXPECT_THROW(make_power_control(-G, Vector::Ones(3), 1, 0.5), PreconditionError);
  EXPECT_THROW(make_power_control(G, Vector::Zero(3), 1, 0.5), PreconditionError);
}

TEST(Power, NoInterferenceSupportsAll)
{
  const Vector noise = Vector::LinSpaced(3, 0.2, 0.8);
  const ProblemSpec p = make_power_control(Matrix::Identity(3, 3), noise, 0.01, 0.5);
  EXPECT_TRUE(p.residual(noise).isZero());
  EXPECT_EQ(max_admissible_links(p), 3);
}

TEST(Decoding, ShapeAndCleanMeasurement)
{
  Matrix C(3, 2);
  C << 1, 2, 3, 4, 5, 6;
  Vector xt(2);
  xt << 0.5, -1.0;
  const ProblemSpec p = make_decoding(C, C * xt, 0.5);
  EXPECT_EQ(p.rows(), 6);
  EXPECT_DOUBLE_EQ(objective_F(p, xt), 0.0);
}

TEST(ThreePartition, Shape)
{
  const ProblemSpec p = make_three_partition({1, 1, 1, 1, 1, 1}, 3);
  EXPECT_EQ(p.dim(), 12);
  EXPECT_EQ(p.rows(), 6 * 4 + 4 * 2);
}

TEST(ThreePartition, Guards)
{
  EXPECT_THROW(make_three_partition({2, 2, 3, 3, 3, 5}, 9), PreconditionError);
  EXPECT_THROW(make_three_partition({1, 1, 1, 1, 1}, 3), PreconditionError);
  EXPECT_THROW(make_three_partition({1, 1, 1, 1, 1, 2}, 3), PreconditionError);
  EXPECT_THROW(brute_force_three_partition(std::vector<long>(12, 1), 4, 3), UnsupportedScale);
}

TEST(ThreePartition, BruteForce)
{
  EXPECT_TRUE(brute_force_three_partition({1, 1, 1, 1, 1, 1}, 2, 3));
  EXPECT_TRUE(brute_force_three_partition({3, 3, 3, 3, 3, 3}, 2, 9));
  EXPECT_TRUE(brute_force_three_partition({3, 3, 4, 3, 3, 4}, 2, 10));
  // No triple of {6, 6, 6, 6, 7, 9} sums to 20.
  EXPECT_FALSE(brute_force_three_partition({6, 6, 6, 6, 7, 9}, 2, 20));
}

TEST(ThreePartition, BinaryPartitionValue)
{
  const long m = 2;
  const ProblemSpec p = make_three_partition({1, 1, 1, 1, 1, 1}, 3);
  Vector x = Vector::Zero(12);
  for (long i = 0; i < 6; ++i) { x(three_partition_var(i, i < 3 ? 0 : 1, m)) = 1.0; }
  EXPECT_DOUBLE_EQ(objective_F(p, x), 3.0 * m * m);
}

TEST(ThreePartition, LowerBoundOnSamples)
{
  const ProblemSpec p = make_three_partition({3, 3, 3, 3, 3, 3}, 9);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int s = 0; s < 2000; ++s) {
    Vector x(12);
    for (int i = 0; i < 12; ++i) { x(i) = u(rng); }
    EXPECT_GE(objective_F(p, x), 12.0 - 1e-9);
  }
}

TEST(Random, DeterministicAndConsistent)
{
  const ProblemSpec a = make_random(7, 5, 9, 0.5, HKind::quadratic, XKind::simplex);
  const ProblemSpec b = make_random(7, 5, 9, 0.5, HKind::quadratic, XKind::simplex);
  EXPECT_TRUE(a.A == b.A);
  EXPECT_TRUE(a.b == b.b);
  EXPECT_TRUE(*a.x0 == *b.x0);
  const auto & qa = std::get<QuadraticH>(a.h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(qa.P);
  EXPECT_NEAR(qa.lipschitz, es.eigenvalues().maxCoeff(), 1e-10);
  EXPECT_TRUE(a.X.contains(*a.x0));
  EXPECT_GE(sampled_min_h(a, 2000, 3), 0.0);
  EXPECT_THROW(make_random(1, 0, 3, 0.5, HKind::zero, XKind::box), PreconditionError);
}

TEST(Random, RoughlyHalfActiveAtGenerator)
{
  const ProblemSpec p = make_random(9, 10, 40, 0.5, HKind::zero, XKind::box);
  int pos = 0;
  const Vector r = p.residual(*p.x0);
  for (Eigen::Index m = 0; m < r.size(); ++m) { pos += r(m) > 0 ? 1 : 0; }
  EXPECT_GT(pos, 5);
  EXPECT_LT(pos, 35);
}
