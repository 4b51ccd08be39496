#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rfib/leftbranch.hpp"

using namespace rfib;

TEST(LeftBranch, KThreeIsPeriodic) {
  auto f = NumberField::create(3);
  const auto branch = ell_sequence(3, f->one(), f->one(), 12);
  const long expected[] = {1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0};
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(branch.values[i], f->from_rational(expected[i])) << "n=" << i + 1;
  EXPECT_EQ(branch.ell(3), f->zero());
}

TEST(LeftBranch, KFourFirstStep) {
  auto f = NumberField::create(4);
  const auto branch = ell_sequence(4, f->one(), f->one(), 3);
  EXPECT_EQ(branch.ell(3), f->generator() - Rational(1));
}

TEST(LeftBranch, KThreeStaysBelowMaxOfStart) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(0, 100), den(1, 9);
  auto f = NumberField::create(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = f->from_rational(make_rational(num(rng), den(rng)));
    const auto b = f->from_rational(make_rational(num(rng), den(rng)) + Rational(1, 10));
    const auto top = compare(a, b) > 0 ? a : b;
    for (const auto& v : ell_sequence(3, a, b, 200).values) EXPECT_LE(compare(v, top), 0);
  }
}

TEST(LeftBranch, DomainErrors) {
  auto f = NumberField::create(5);
  EXPECT_THROW(ell_sequence(5, f->zero(), f->zero(), 5), DomainError);
  EXPECT_THROW(ell_sequence(5, f->one(), f->one(), 1), DomainError);
  EXPECT_THROW(ell_sequence(5, f->from_rational(-1), f->one(), 5), DomainError);
  EXPECT_THROW(ell_sequence(4, f->one(), f->one(), 5), ContractError);
}

TEST(Circle, Examples) {
  const double theta = std::numbers::pi / 3;
  const auto at_zero = circle_radius(0, 1, theta);
  EXPECT_NEAR(at_zero.radius, 2 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(at_zero.t, -std::numbers::pi / 2, 1e-14);
  const auto both_one = circle_radius(1, 1, theta);
  EXPECT_NEAR(both_one.radius, 2 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(both_one.t, -std::numbers::pi / 6, 1e-14);
  const auto unit = circle_radius(1, std::cos(theta), theta);
  EXPECT_NEAR(unit.radius, 1, 1e-14);
  EXPECT_NEAR(unit.t, 0, 1e-14);
}

TEST(Circle, PointsLieOnTheCircle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 10);
  for (int k = 3; k <= 10; ++k) {
    const double theta = std::numbers::pi / k;
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng), y = u(rng);
      const auto c = circle_radius(x, y, theta);
      EXPECT_NEAR(c.radius * std::cos(c.t), x, 1e-9);
      EXPECT_NEAR(c.radius * std::cos(c.t + theta), y, 1e-9);
    }
  }
}

TEST(Circle, DomainErrors) {
  EXPECT_THROW(circle_radius(0, 0, 1), DomainError);
  EXPECT_THROW(circle_radius(-1, 1, 1), DomainError);
  EXPECT_THROW(circle_radius(1, 1, 0), DomainError);
  EXPECT_THROW(circle_radius(1, 1, std::numbers::pi), DomainError);
}

TEST(Circle, ExactSquaredRadiusMatchesTrigonometry) {
  for (int k = 3; k <= 10; ++k) {
    auto f = NumberField::create(k);
    const auto x = f->from_rational(Rational(3, 2)), y = f->from_rational(Rational(7, 3));
    const double r = circle_radius(1.5, 7.0 / 3, std::numbers::pi / k).radius;
    EXPECT_NEAR(squared_radius(x, y).to_double(), r * r, 1e-10);
  }
}

TEST(RadiusCertificate, ConstantOnThePeriodThreeOrbit) {
  auto f = NumberField::create(3);
  const auto cert = radius_certificate(ell_sequence(3, f->one(), f->one(), 30));
  EXPECT_TRUE(cert.nonincreasing);
  EXPECT_TRUE(cert.bounded);
  for (const auto& r2 : cert.squared_radii) EXPECT_EQ(r2, cert.squared_radii.front());
}

TEST(RadiusCertificate, KFourLargeSecondValue) {
  auto f = NumberField::create(4);
  const auto cert = radius_certificate(ell_sequence(4, f->one(), f->from_rational(10), 100));
  EXPECT_TRUE(cert.nonincreasing);
  EXPECT_TRUE(cert.bounded);
  for (std::size_t i = 1; i < cert.radii.size(); ++i) EXPECT_LE(cert.radii[i], cert.radii[i - 1] * (1 + 1e-12));
}

TEST(RadiusCertificate, KFiveBoundedByFirstRadius) {
  auto f = NumberField::create(5);
  const auto branch = ell_sequence(5, f->one(), f->one(), 50);
  const auto cert = radius_certificate(branch);
  EXPECT_TRUE(cert.bounded);
  for (const auto& v : branch.values) EXPECT_LE(v.to_double(), cert.radii.front() + 1e-12);
}

TEST(RadiusCertificate, RandomStarts) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> kd(3, 10);
  std::uniform_int_distribution<long> num(0, 100), den(1, 8);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = kd(rng);
    auto f = NumberField::create(k);
    const auto a = f->from_rational(make_rational(num(rng), den(rng)));
    const auto b = f->from_rational(make_rational(num(rng), den(rng)) + Rational(1, 3));
    const auto cert = radius_certificate(ell_sequence(k, a, b, 200));
    EXPECT_TRUE(cert.nonincreasing) << "k=" << k;
    EXPECT_TRUE(cert.bounded) << "k=" << k;
    EXPECT_FALSE(cert.first_violation.has_value());
  }
}

TEST(RadiusCertificate, NeedsThreeTerms) {
  auto f = NumberField::create(5);
  EXPECT_THROW(radius_certificate(ell_sequence(5, f->one(), f->one(), 2)), DomainError);
}
