#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rfib/number_field.hpp"

using namespace rfib;

namespace {

RationalPolynomial poly(std::initializer_list<long> coeffs_low_first) {
  std::vector<Rational> c;
  for (long v : coeffs_low_first) c.emplace_back(v);
  return RationalPolynomial(c);
}

FieldElement random_element(const FieldPtr& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 9);
  std::vector<Rational> c;
  for (int i = 0; i < f->degree(); ++i) c.push_back(make_rational(num(rng), den(rng)));
  return f->from_coefficients(c);
}

}  // namespace

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational(" -3/6 "), Rational(-1, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, FractionStringAlwaysHasDenominator) {
  EXPECT_EQ(to_fraction_string(Rational(3)), "3/1");
  EXPECT_EQ(to_fraction_string(make_rational(-2, 4)), "-1/2");
}

TEST(Rational, BinomialOutsideRangeIsZero) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(5, -1), 0);
  EXPECT_EQ(binomial(5, 6), 0);
}

TEST(MinimalPolynomial, KnownSmallCases) {
  EXPECT_EQ(minimal_polynomial(3), poly({-1, 1}));
  EXPECT_EQ(minimal_polynomial(4), poly({-2, 0, 1}));
  EXPECT_EQ(minimal_polynomial(5), poly({-1, -1, 1}));
  EXPECT_EQ(minimal_polynomial(6), poly({-3, 0, 1}));
  EXPECT_EQ(minimal_polynomial(7), poly({1, -2, -1, 1}));
  EXPECT_EQ(minimal_polynomial(8), poly({2, 0, -4, 0, 1}));
  EXPECT_EQ(minimal_polynomial(12), poly({1, 0, -4, 0, 1}));
}

TEST(MinimalPolynomial, DegreeIsHalfTotientAndRootIsTwoCos) {
  for (int k = 3; k <= 40; ++k) {
    const auto mu = minimal_polynomial(k);
    EXPECT_EQ(mu.degree(), euler_totient(2 * k) / 2) << "k=" << k;
    EXPECT_EQ(mu.leading(), 1);
    for (const auto& c : mu.coeffs()) EXPECT_EQ(c.get_den(), 1) << "k=" << k;
    const double root = 2 * std::cos(std::numbers::pi / k);
    double value = 0;
    for (std::size_t i = mu.coeffs().size(); i-- > 0;) value = value * root + mu.coeffs()[i].get_d();
    EXPECT_NEAR(value, 0.0, 1e-9) << "k=" << k;
  }
}

TEST(MinimalPolynomial, RejectsSmallK) {
  EXPECT_THROW(minimal_polynomial(2), DomainError);
  EXPECT_THROW(NumberField::create(1), DomainError);
}

TEST(NumberField, GeneratorSatisfiesMinimalPolynomial) {
  auto f4 = NumberField::create(4);
  EXPECT_EQ(f4->generator() * f4->generator(), f4->from_rational(2));
  auto f5 = NumberField::create(5);
  const auto g = f5->generator();
  EXPECT_EQ(g * g, g + Rational(1));
  auto f3 = NumberField::create(3);
  EXPECT_TRUE(f3->generator().is_rational());
  EXPECT_EQ(f3->generator(), f3->one());
}

TEST(NumberField, FieldAxiomsOnRandomElements) {
  std::mt19937_64 rng(7);
  for (int k : {4, 5, 7, 8, 9, 11}) {
    auto f = NumberField::create(k);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_element(f, rng), y = random_element(f, rng), z = random_element(f, rng);
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ((x * y) * z, x * (y * z));
      if (!x.is_zero()) {
        EXPECT_EQ(x * x.inverse(), f->one());
      }
      EXPECT_EQ(x.times_generator(), x * f->generator());
      EXPECT_NEAR((x * y).to_double(), x.to_double() * y.to_double(), 1e-9 * (1 + std::abs(x.to_double() * y.to_double())));
    }
  }
}

TEST(NumberField, DivisionByZeroThrows) {
  auto f = NumberField::create(5);
  EXPECT_THROW(f->zero().inverse(), ArithmeticError);
}

TEST(NumberField, MixingFieldsIsAContractError) {
  auto f4 = NumberField::create(4), f5 = NumberField::create(5);
  EXPECT_THROW(f4->generator() + f5->generator(), ContractError);
}

TEST(NumberField, SignIsExactNearIrrationalValues) {
  // sqrt(2) against its 40-digit truncation
  auto f = NumberField::create(4);
  Integer big = 1;
  for (int i = 0; i < 40; ++i) big *= 10;
  Integer s;
  const Integer two_big_sq = 2 * big * big;
  mpz_sqrt(s.get_mpz_t(), two_big_sq.get_mpz_t());
  const Rational below(s, big), above(Integer(s + 1), big);
  EXPECT_EQ((f->generator() - below).sign(), 1);
  EXPECT_EQ((f->generator() - above).sign(), -1);
  // golden ratio identity is exactly zero
  auto g = NumberField::create(5)->generator();
  EXPECT_EQ((g * g - g - Rational(1)).sign(), 0);
}

TEST(NumberField, EnclosureContainsValueAndShrinks) {
  for (int k = 3; k <= 12; ++k) {
    auto f = NumberField::create(k);
    const auto x = f->generator() * Rational(3) - Rational(1, 7);
    const Interval coarse = x.enclosure(64), fine = x.enclosure(256);
    const double v = 3 * 2 * std::cos(std::numbers::pi / k) - 1.0 / 7;
    EXPECT_LE(coarse.lo.get_d(), v + 1e-12);
    EXPECT_GE(coarse.hi.get_d(), v - 1e-12);
    EXPECT_TRUE(coarse.contains(fine));
    EXPECT_LT(fine.width(), Rational(1, Integer(1) << 200));
  }
}

TEST(NumberField, LambdaDoubleMatchesCosine) {
  for (int k = 3; k <= 30; ++k) EXPECT_NEAR(lambda_k(k).to_double(), 2 * std::cos(std::numbers::pi / k), 1e-15);
  EXPECT_EQ(lambda_k(3).to_double(), 1.0);
}

TEST(NumberField, CompareAndAbs) {
  auto f = NumberField::create(7);
  const auto l = f->generator();
  EXPECT_EQ(compare(l, f->from_rational(2)), -1);
  EXPECT_EQ(compare(l, f->from_rational(Rational(9, 5))), 1);
  EXPECT_EQ(abs(f->one() - l), l - Rational(1));
  EXPECT_EQ(pow(l, 3), l * l * l);
}

TEST(NumberField, PrintsPolynomialInLambda) {
  auto f = NumberField::create(5);
  std::ostringstream os;
  os << f->generator() * Rational(2) + Rational(1);
  EXPECT_NE(os.str().find("L"), std::string::npos);
}
