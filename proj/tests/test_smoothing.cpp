#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssqp/ssqp.hpp"

using namespace ssqp;

namespace {

ProblemSpec one_row(double a, double b, double q)
{
  ProblemSpec p;
  p.A = Matrix::Constant(1, 1, a);
  p.b = Vector::Constant(1, b);
  p.q = q;
  p.X = Polyhedron::free(1);
  return p;
}

}  // namespace

TEST(Kernel, BranchValues)
{
  EXPECT_DOUBLE_EQ(theta(2.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(theta(0.5, 1.0), 0.625);
  EXPECT_DOUBLE_EQ(theta(-3.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(theta(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(theta(1.0, 1.0), 1.0);
}

TEST(Kernel, MatchesIndependentClosedForm)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  std::uniform_real_distribution<double> mu(1e-3, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double tt = t(rng);
    const double mm = mu(rng);
    EXPECT_NEAR(theta(tt, mm), oracle::theta(tt, mm), 1e-14 * (1.0 + std::abs(tt)));
  }
}

TEST(Kernel, FloorAndExactness)
{
  for (double t = -2.0; t <= 3.0; t += 0.01) {
    EXPECT_GE(theta(t, 0.7), 0.35);
    if (t >= 0.7) { EXPECT_DOUBLE_EQ(theta(t, 0.7), t); }
  }
}

TEST(Kernel, RejectsBadArguments)
{
  EXPECT_THROW(theta(1.0, 0.0), DomainError);
  EXPECT_THROW(theta(1.0, -1.0), DomainError);
  EXPECT_THROW(theta(std::nan(""), 1.0), DomainError);
  EXPECT_THROW(theta_q(1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(theta_q(1.0, 1.0, 1.5), DomainError);
}

TEST(Kernel, FirstDerivativeAgreesWithDifferences)
{
  for (const double q : {0.1, 0.5, 1.0}) {
    for (double t = -1.9; t < 2.9; t += 0.0731) {
      const double h = 1e-7;
      const double fd = (theta_q(t + h, 0.8, q) - theta_q(t - h, 0.8, q)) / (2 * h);
      EXPECT_NEAR(theta_q_d1(t, 0.8, q), fd, 1e-6 * (1.0 + std::abs(fd))) << "t=" << t << " q=" << q;
    }
  }
  EXPECT_DOUBLE_EQ(theta_q_d1(-1.0, 1.0, 0.5), 0.0);
  EXPECT_NEAR(theta_q_d1(2.0, 1.0, 0.5), 0.5 / std::sqrt(2.0), 1e-15);
}

TEST(Kernel, SecondDerivativeUndefinedAtBreakpoints)
{
  EXPECT_FALSE(theta_q_d2(0.0, 1.0, 0.5).has_value());
  EXPECT_FALSE(theta_q_d2(1.0, 1.0, 0.5).has_value());
  ASSERT_TRUE(theta_q_d2(0.5, 1.0, 0.5).has_value());
  const double h = 1e-5;
  const double fd = (theta_q_d1(0.5 + h, 1.0, 0.5) - theta_q_d1(0.5 - h, 1.0, 0.5)) / (2 * h);
  EXPECT_NEAR(*theta_q_d2(0.5, 1.0, 0.5), fd, 1e-6);
}

TEST(Kernel, CurvatureCapBand)
{
  EXPECT_NEAR(kappa(0.3, 0.5, 0.5), 2.0 * std::pow(2.0, 1.5), 1e-12);
  EXPECT_DOUBLE_EQ(kappa(1.5, 0.5, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(kappa(-0.5, 0.5, 0.5), 4 * 0.5 * std::pow(0.5, -1.5));
  EXPECT_DOUBLE_EQ(kappa(1.0, 0.5, 0.5), 4 * 0.5 * std::pow(0.5, -1.5));
  EXPECT_DOUBLE_EQ(kappa(-0.5000001, 0.5, 0.5), 0.0);
}

TEST(Objective, SmallCases)
{
  ProblemSpec p;
  p.A = Matrix::Identity(2, 2);
  p.b = Vector::Zero(2);
  p.X = Polyhedron::free(2);
  EXPECT_DOUBLE_EQ(objective_F(p, Vector::Ones(2)), 0.0);

  EXPECT_DOUBLE_EQ(objective_F(one_row(1, 1, 0.5), Vector::Zero(1)), 1.0);
  EXPECT_DOUBLE_EQ(objective_F(one_row(1, 1, 0.5), Vector::Constant(1, 0.75)), 0.5);
  EXPECT_NEAR(objective_F_tilde(one_row(1, -5, 0.5), Vector::Zero(1), 1.0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(objective_F_tilde(one_row(1, 2, 0.5), Vector::Zero(1), 1.0), std::sqrt(2.0), 1e-15);
  const ProblemSpec z = one_row(1, 0, 0.5);
  EXPECT_NEAR(objective_F_tilde(z, Vector::Zero(1), 1.0) - objective_F(z, Vector::Zero(1)), std::sqrt(0.5), 1e-15);
}

TEST(Objective, SandwichOnRandomInstances)
{
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ProblemSpec p = make_random(seed, 4, 7, 0.4, HKind::quadratic, XKind::box);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int s = 0; s < 200; ++s) {
      Vector x(4);
      for (int i = 0; i < 4; ++i) { x(i) = u(rng); }
      const double mu = 0.05 + 0.9 * (s % 10) / 10.0;
      const double F = objective_F(p, x);
      const double Ft = objective_F_tilde(p, x, mu);
      const Vector r = p.residual(x);
      double gap = 0;
      for (Eigen::Index m = 0; m < r.size(); ++m) {
        if (r(m) <= mu) { gap += std::pow(mu / 2, p.q); }
      }
      EXPECT_LE(F, Ft + 1e-12);
      EXPECT_LE(Ft, F + gap + 1e-12);
      EXPECT_NEAR(Ft, oracle::F_tilde(p, x, mu), 1e-12 * (1 + std::abs(Ft)));
    }
  }
}

TEST(Objective, GradientKnownValue)
{
  const ProblemSpec p = one_row(1, 2, 0.5);
  EXPECT_NEAR(grad_F_tilde(p, Vector::Zero(1), 1.0)(0), -0.5 / std::sqrt(2.0), 1e-15);
  const ProblemSpec neg = one_row(1, -3, 0.5);
  EXPECT_DOUBLE_EQ(grad_F_tilde(neg, Vector::Zero(1), 1.0)(0), 0.0);
}

TEST(Objective, GradientMatchesDifferences)
{
  const ProblemSpec p = make_random(3, 5, 9, 0.6, HKind::quadratic, XKind::simplex);
  const SmoothedObjective obj(p, 0.3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    Vector x(5);
    for (int i = 0; i < 5; ++i) { x(i) = u(rng); }
    const Vector g = obj.gradient(x);
    const Vector fd = oracle::fd_gradient([&](const Vector & y) { return oracle::F_tilde(p, y, 0.3); }, x);
    EXPECT_LE((g - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
  }
}
