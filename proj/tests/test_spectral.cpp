#include <gtest/gtest.h>

#include <cmath>

#include "rfib/spectral.hpp"

using namespace rfib;

namespace {

const std::vector<Rational> kGrid = {Rational(1, 10), Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                     Rational(2, 3), Rational(9, 10)};

// Largest real root of x^3 - 2x^2 - 1 by Newton in double precision.
double cubic_root() {
  double x = 2.2;
  for (int i = 0; i < 50; ++i) x -= (x * x * x - 2 * x * x - 1) / (3 * x * x - 4 * x);
  return x;
}

}  // namespace

TEST(CharacteristicPolynomial, KThreeHalf) {
  const auto P = build_Pk(3, Rational(1, 2));
  auto f = NumberField::create(3);
  std::vector<FieldElement> expected(7, f->zero());
  expected[6] = f->one();
  expected[5] = f->from_rational(-1);
  expected[2] = f->from_rational(Rational(-1, 8));
  expected[0] = f->from_rational(Rational(-1, 64));
  EXPECT_EQ(P, FieldPolynomial(expected));
}

TEST(CharacteristicPolynomial, ProbabilityOneDegenerates) {
  for (int k = 3; k <= 8; ++k) {
    auto f = NumberField::create(k);
    const auto quad = FieldPolynomial({f->from_rational(-1), -f->generator(), f->one()});
    EXPECT_EQ(build_Pk(k, Rational(1)), FieldPolynomial::monomial(f->one(), 2 * k - 2) * quad);
  }
}

TEST(CharacteristicPolynomial, ValueAtQ) {
  for (int k = 3; k <= 10; ++k) {
    const auto lambda = lambda_k(k);
    for (const auto& p : kGrid) {
      const Rational q = 1 - p;
      const auto expected = (lambda.field()->from_rational(2 - 4 * p) - lambda) * pow(q, 2 * k - 2);
      EXPECT_EQ(build_Pk(k, p)(q), expected) << "k=" << k;
    }
  }
}

TEST(Cofactor, FactorizationIsExactAndCoefficientsPositive) {
  for (int k = 3; k <= 10; ++k) {
    std::vector<Rational> ps = kGrid;
    ps.push_back(Rational(1));
    for (const auto& p : ps) {
      EXPECT_EQ(quadratic_factor(k, p) * cofactor_polynomial(k, p), build_Pk(k, p)) << "k=" << k << " p=" << p;
      for (const auto& a : cofactor_coefficients(k, p)) EXPECT_GT(a.sign(), 0) << "k=" << k << " p=" << p;
    }
  }
}

TEST(Cofactor, NamedCoefficients) {
  for (int k = 4; k <= 10; ++k) {
    const auto lambda = lambda_k(k);
    for (const auto& p : kGrid) {
      const Rational q = 1 - p;
      const auto a = cofactor_coefficients(k, p);
      EXPECT_EQ(a[k - 2], lambda.field()->one());
      EXPECT_EQ(a[k - 1], lambda);
      EXPECT_EQ(a[k], lambda * lambda - p);
      EXPECT_EQ(a[2 * k - 4], lambda * lambda * q + p);
      EXPECT_EQ(a[2 * k - 3], lambda);
    }
  }
  // k = 3: every coefficient is 1
  for (const auto& a : cofactor_coefficients(3, Rational(1, 3))) EXPECT_EQ(a, lambda_k(3).field()->one());
}

TEST(PositiveRoot, KThreeHalf) {
  const auto root = positive_root(build_Pk(3, Rational(1, 2)), Rational(1, Integer(1) << 60));
  EXPECT_NEAR(root.decimal(), cubic_root() / 2, 1e-12);
  EXPECT_NEAR(root.decimal(), 1.102784715, 1e-9);
  EXPECT_TRUE(is_simple_root(build_Pk(3, Rational(1, 2)), root));
}

TEST(PositiveRoot, ProbabilityOneIsQuadraticRoot) {
  for (int k = 3; k <= 8; ++k) {
    const double l = lambda_k(k).to_double();
    const auto root = positive_root(build_Pk(k, Rational(1)), Rational(1, Integer(1) << 60));
    EXPECT_NEAR(root.decimal(), (l + std::sqrt(l * l + 4)) / 2, 1e-12);
  }
}

TEST(PositiveRoot, CofactorAndFullPolynomialShareTheRoot) {
  for (int k = 3; k <= 7; ++k) {
    for (const auto& p : kGrid) {
      const Rational w(1, Integer(1) << 50);
      const auto a = positive_root(build_Pk(k, p), w), b = positive_root(cofactor_polynomial(k, p), w);
      EXPECT_LE(a.lo, b.hi);
      EXPECT_LE(b.lo, a.hi);
      EXPECT_TRUE(is_simple_root(build_Pk(k, p), a));
    }
  }
}

TEST(PositiveRoot, NoSignChangeIsAContractError) {
  auto f = NumberField::create(4);
  const FieldPolynomial no_root({f->one(), f->zero(), f->one()});  // X^2 + 1
  EXPECT_THROW(positive_root(no_root, Rational(1, 1000)), ContractError);
}

TEST(Growth, KThreeHalfRate) {
  const auto g = growth_rate_k(3, Rational(1, 2));
  EXPECT_EQ(g.regime, Regime::supercritical);
  ASSERT_TRUE(g.rate);
  EXPECT_NEAR(g.rate_decimal(), cubic_root() - 1, 1e-12);
  EXPECT_NEAR(g.rate_decimal(), 1.20556943, 1e-8);
  EXPECT_LT(g.rate_error_bound(), 1e-15);
  EXPECT_EQ(*g.p_c, lambda_k(3).field()->from_rational(Rational(1, 4)));
}

TEST(Growth, Regimes) {
  EXPECT_EQ(growth_rate_k(3, Rational(1, 5)).regime, Regime::subcritical);
  EXPECT_EQ(growth_rate_k(3, Rational(1, 4)).regime, Regime::critical);
  EXPECT_FALSE(growth_rate_k(3, Rational(1, 4)).rate);
  const auto zero = growth_rate_k(5, Rational(0));
  EXPECT_EQ(zero.regime, Regime::subcritical);
  EXPECT_FALSE(zero.alpha);
  for (int k = 4; k <= 10; ++k) {
    const double pc = (2 - lambda_k(k).to_double()) / 4;
    EXPECT_EQ(growth_rate_k(k, Rational(pc * 0.99)).regime, Regime::subcritical);
    EXPECT_EQ(growth_rate_k(k, Rational(pc * 1.01)).regime, Regime::supercritical);
  }
}

TEST(Growth, RootExceedsQExactlyAboveCriticalProbability) {
  for (int k = 3; k <= 8; ++k) {
    for (const auto& p : kGrid) {
      const auto g = growth_rate_k(k, p, Rational(1, Integer(1) << 40));
      const Rational q = 1 - p;
      const bool above = g.regime == Regime::supercritical;
      if (above) {
        EXPECT_GT(g.alpha->lo, q) << "k=" << k << " p=" << p;
        EXPECT_GT(g.rate->lo, 1);
      } else if (g.regime == Regime::subcritical) {
        EXPECT_LT(g.alpha->hi, q) << "k=" << k << " p=" << p;
      }
    }
  }
}

TEST(Growth, ContinuousOnAFineGrid) {
  const Rational step(1, 200);
  const auto rows = sweep_k(4, Rational(1, 2), Rational(1), step);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::abs(rows[i].report.rate_decimal() - rows[i - 1].report.rate_decimal()), 10 * step.get_d());
    EXPECT_GT(rows[i].report.rate_decimal(), rows[i - 1].report.rate_decimal());
  }
}

TEST(Growth, LargeLambdaClosedForm) {
  EXPECT_TRUE(growth_rate_large_lambda(2, Rational(1, 2)).rate->contains(Rational(2)));
  EXPECT_NEAR(growth_rate_large_lambda(2, 1).rate_decimal(), 1 + std::sqrt(2.0), 1e-15);
  EXPECT_THROW(growth_rate_large_lambda(2, 0), DomainError);
  EXPECT_THROW(growth_rate_large_lambda(Rational(3, 2), Rational(1, 2)), DomainError);
  EXPECT_EQ(growth_rate_large_lambda(3, Rational(1, 2)).regime, Regime::large_lambda);
}

TEST(AnalyticityGap, BothSidesAgreeAndArePositive) {
  for (int k : {3, 5}) {
    const auto gap = analyticity_gap(k, Rational(1, 2));
    EXPECT_TRUE(gap.identity_exact);
    EXPECT_TRUE(gap.positive);
    EXPECT_NEAR(gap.lhs.midpoint(), gap.rhs.midpoint(), 1e-10);
    EXPECT_LT(gap.lhs.width(), Rational(1, 1000000000));
  }
  EXPECT_THROW(analyticity_gap(3, Rational(1)), DomainError);
  EXPECT_THROW(analyticity_gap(3, Rational(1, 5)), DomainError);
}

TEST(HalfCase, FactorizationBoundAndRate) {
  for (int k = 3; k <= 10; ++k) {
    const auto h = half_case(k);
    EXPECT_TRUE(h.factorization_exact) << "k=" << k;
    EXPECT_TRUE(h.bound_ok) << "k=" << k;
    const double gap = h.alpha.decimal() - lambda_k(k).to_double();
    EXPECT_GT(gap, 0);
    EXPECT_LT(gap, std::ldexp(1.0, -k));
    const auto g = growth_rate_k(k, Rational(1, 2));
    EXPECT_NEAR(h.rate.midpoint(), g.rate_decimal(), 1e-15);
  }
  EXPECT_NEAR(half_case(3).rate.midpoint(), 1.20556943, 1e-8);
}

TEST(GrowthFunction, EnclosesPointValues) {
  const Interval x{Rational(11, 10), Rational(111, 100)};
  const auto y = growth_function(3, Rational(1, 2), x);
  for (double t : {1.1, 1.105, 1.11}) {
    const double v = t * (1 + 0.125 / (t * t * t));
    EXPECT_LE(y.lo.get_d(), v + 1e-15);
    EXPECT_GE(y.hi.get_d(), v - 1e-15);
  }
}
