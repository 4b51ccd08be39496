#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rfib/number_field.hpp"
#include "rfib/polynomial.hpp"

namespace rfib {

using FieldPolynomial = Polynomial<FieldElement>;

// ---------------------------------------------------------------------------
// Rational interval arithmetic (outward enclosures, exact endpoints)
// ---------------------------------------------------------------------------

namespace interval {

inline Interval point(const Rational& x) { return {x, x}; }
inline Interval add(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval sub(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval scale(const Interval& a, const Rational& s) {
  return s >= 0 ? Interval{a.lo * s, a.hi * s} : Interval{a.hi * s, a.lo * s};
}
inline Interval mul(const Interval& a, const Interval& b) {
  const Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}
inline Interval pow(const Interval& a, unsigned e) {
  Interval r = point(Rational(1));
  for (unsigned i = 0; i < e; ++i) r = mul(r, a);
  return r;
}
/// 1/a for an interval not containing 0.
inline Interval inverse(const Interval& a) {
  if (a.lo <= 0 && a.hi >= 0) throw ArithmeticError("interval inverse: interval contains zero");
  return {Rational(1) / a.hi, Rational(1) / a.lo};
}
/// Enclosure of sqrt(x) for a rational x >= 0, width about 2^-bits.
inline Interval sqrt(const Rational& x, int bits = 128) {
  if (x < 0) throw DomainError("sqrt of a negative number");
  // sqrt(n/d) = sqrt(n d) / d
  const Integer scaled = x.get_num() * x.get_den() * (Integer(1) << (2 * bits));
  Integer s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  const Integer denom = x.get_den() * (Integer(1) << bits);
  const bool exact = s * s == scaled;
  Rational lo(s, denom), hi(exact ? s : Integer(s + 1), denom);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}
/// Enclosure of a field element evaluated at an interval-valued polynomial variable.
inline Interval of(const FieldElement& x, int bits = 128) { return x.enclosure(bits); }

/// Interval Horner evaluation of a polynomial with field coefficients.
inline Interval evaluate(const FieldPolynomial& f, const Interval& x, int bits = 128) {
  const auto& c = f.coeffs();
  Interval acc = of(c.back(), bits);
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = add(mul(acc, x), of(c[i], bits));
  return acc;
}

}  // namespace interval

// ---------------------------------------------------------------------------
// Characteristic polynomial and its factorization
// ---------------------------------------------------------------------------

namespace detail {

inline void check_spectral_args(int k, const Rational& p) {
  if (k < 3) throw DomainError("k must be >= 3");
  if (p < 0 || p > 1) throw DomainError("probability p must lie in [0, 1]");
}

inline FieldPolynomial field_polynomial(const FieldPtr& f, std::size_t degree) {
  return FieldPolynomial(std::vector<FieldElement>(degree + 1, f->zero()));
}

}  // namespace detail

/// P_k(X) = X^{2k} - lambda X^{2k-1} - (2p-1) X^{2k-2} - lambda p q^{k-1} X^{k-1} - p^2 q^{2k-2}.
inline FieldPolynomial build_Pk(int k, const Rational& p) {
  detail::check_spectral_args(k, p);
  const FieldPtr f = NumberField::create(k);
  const FieldElement lambda = f->generator();
  const Rational q = 1 - p;
  const Rational c = p * pow(q, static_cast<unsigned>(k - 1));
  const auto kk = static_cast<std::size_t>(k);
  std::vector<FieldElement> coeffs(2 * kk + 1, f->zero());
  coeffs[2 * kk] = f->one();
  coeffs[2 * kk - 1] = -lambda;
  coeffs[2 * kk - 2] = f->from_rational(1 - 2 * p);
  coeffs[kk - 1] = -(lambda * c);
  coeffs[0] = f->from_rational(-(c * c));
  return FieldPolynomial(std::move(coeffs));
}

/// X^2 - q lambda X + q^2.
inline FieldPolynomial quadratic_factor(int k, const Rational& p) {
  detail::check_spectral_args(k, p);
  const FieldPtr f = NumberField::create(k);
  const Rational q = 1 - p;
  return FieldPolynomial({f->from_rational(q * q), -(f->generator() * q), f->one()});
}

/// a_0 .. a_{2k-3} of the cofactor of X^2 - q lambda X + q^2 in P_k.
///
/// The last coefficient is lambda: for k >= 4 it comes from
/// q a_{2k-3} = lambda a_{2k-4} - a_{2k-5}; for k = 3 that index coincides
/// with a_k and both relations are superseded by the degree-3 identity.
inline std::vector<FieldElement> cofactor_coefficients(int k, const Rational& p) {
  detail::check_spectral_args(k, p);
  const FieldPtr f = NumberField::create(k);
  const FieldElement lambda = f->generator();
  const Rational q = 1 - p;
  const auto top = static_cast<std::size_t>(2 * k - 3);
  const auto kk = static_cast<std::size_t>(k);
  std::vector<FieldElement> a(top + 1, f->zero());
  a[0] = f->one();
  a[1] = lambda;
  for (std::size_t j = 2; j + 2 <= kk; ++j) a[j] = lambda * a[j - 1] - a[j - 2];
  const FieldElement& a_km2 = a[kk - 2];
  const FieldElement a_km3 = kk >= 3 ? a[kk - 3] : f->zero();
  a[kk - 1] = lambda + (lambda * a_km2 - a_km3) * p;
  if (kk < top) {
    a[kk] = lambda * a[kk - 1] - a[kk - 2] * p;
    for (std::size_t j = kk + 1; j + 4 <= 2 * kk; ++j) a[j] = lambda * a[j - 1] - a[j - 2];
    a[top] = sgn(q) == 0 ? lambda : (lambda * a[top - 1] - a[top - 2]) * Rational(1 / q);
  } else {
    a[top] = lambda;
  }
  return a;
}

/// X^{2k-2} - p a_{2k-3} X^{2k-3} - p sum_j a_{k-1+j} q^{k-3-j} X^{k-1+j}
///          - p^2 sum_j a_j q^{2k-4-j} X^j.
inline FieldPolynomial cofactor_polynomial(int k, const Rational& p) {
  const auto a = cofactor_coefficients(k, p);
  const FieldPtr& f = a.front().field();
  const Rational q = 1 - p;
  const auto kk = static_cast<std::size_t>(k);
  std::vector<FieldElement> c(2 * kk - 1, f->zero());
  c[2 * kk - 2] = f->one();
  c[2 * kk - 3] = -(a[2 * kk - 3] * p);
  for (std::size_t j = 0; j + 3 <= kk; ++j) {
    c[kk - 1 + j] -= a[kk - 1 + j] * Rational(p * pow(q, static_cast<unsigned>(kk - 3 - j)));
  }
  for (std::size_t j = 0; j + 2 <= kk; ++j) {
    c[j] -= a[j] * Rational(p * p * pow(q, static_cast<unsigned>(2 * kk - 4 - j)));
  }
  return FieldPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Positive root isolation
// ---------------------------------------------------------------------------

struct RootBracket {
  Rational lo;
  Rational hi;
  /// lo == hi is the root itself.
  bool exact = false;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  double decimal() const { return to_double(midpoint()); }
  Interval interval() const { return {lo, hi}; }
};

/// Unique positive root of `poly` by exact-sign bisection on [0, 1 + sum |c_j / c_n|].
inline RootBracket positive_root(FieldPolynomial poly, const Rational& width) {
  if (width <= 0) throw DomainError("positive_root: width must be positive");
  if (poly.degree() < 1) throw ContractError("positive_root: polynomial must be nonconstant");
  poly.strip_low_powers();
  if (poly.degree() < 1) throw ContractError("positive_root: no positive root (monomial)");
  const auto& c = poly.coeffs();
  const Rational lead_lo = abs(poly.leading()).enclosure(64).lo;
  if (lead_lo <= 0) throw ContractError("positive_root: leading coefficient too small to bound roots");
  Rational bound(1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound += abs(c[i]).enclosure(64).hi / lead_lo;

  RootBracket b{Rational(0), bound, false};
  int sign_lo = poly(b.lo).sign();
  const int sign_hi = poly(b.hi).sign();
  if (sign_lo == 0 || sign_hi == 0 || sign_lo == sign_hi) {
    throw ContractError("positive_root: no sign change on [0, " + to_fraction_string(bound) + "]");
  }
  while (b.hi - b.lo > width) {
    const Rational mid = b.midpoint();
    const int s = poly(mid).sign();
    if (s == 0) return {mid, mid, true};
    if (s == sign_lo) {
      b.lo = mid;
    } else {
      b.hi = mid;
    }
  }
  (void)sign_lo;
  return b;
}

/// Same sign of f' at both ends of the bracket (simple root check).
inline bool is_simple_root(const FieldPolynomial& poly, const RootBracket& root) {
  const FieldPolynomial d = poly.derivative();
  const int s_lo = d(root.lo).sign();
  const int s_hi = d(root.hi).sign();
  return s_lo != 0 && s_lo == s_hi;
}

// ---------------------------------------------------------------------------
// Growth rates
// ---------------------------------------------------------------------------

enum class Regime { supercritical, critical, subcritical, large_lambda };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::supercritical: return "supercritical";
    case Regime::critical: return "critical";
    case Regime::subcritical: return "subcritical";
    case Regime::large_lambda: return "large_lambda";
  }
  return "unknown";
}

inline const Rational& default_root_width() {
  static const Rational w(1, Integer(1) << 80);
  return w;
}

struct GrowthReport {
  std::optional<int> k;
  std::optional<Rational> lambda;
  Rational p;
  /// Only defined for lambda = lambda_k.
  std::optional<FieldElement> p_c;
  Regime regime = Regime::subcritical;
  /// Positive root of P_k, absent when there is none (p = 0) or lambda >= 2.
  std::optional<RootBracket> alpha;
  /// Limit of m_{n+1}/m_n, present in the supercritical and large-lambda regimes.
  std::optional<Interval> rate;

  double rate_decimal() const { return rate ? rate->midpoint() : 0.0; }
  double rate_error_bound() const { return rate ? rate->radius() : 0.0; }
};

/// (2 - lambda_k) / 4.
inline FieldElement critical_probability(int k) {
  if (k < 3) throw DomainError("k must be >= 3");
  const FieldPtr f = NumberField::create(k);
  return (f->from_rational(2) - f->generator()) * Rational(1, 4);
}

/// f(x) = x (1 + p q^{k-1} / x^k) over a bracket of positive x.
inline Interval growth_function(int k, const Rational& p, const Interval& x) {
  if (x.lo <= 0) throw DomainError("growth_function: x must be positive");
  const Rational c = p * pow(1 - p, static_cast<unsigned>(k - 1));
  // x and c x^{1-k} are each monotone in x.
  return {x.lo + c / pow(x.hi, static_cast<unsigned>(k - 1)), x.hi + c / pow(x.lo, static_cast<unsigned>(k - 1))};
}

inline GrowthReport growth_rate_k(int k, const Rational& p, const Rational& width = default_root_width()) {
  detail::check_spectral_args(k, p);
  GrowthReport r;
  r.k = k;
  r.p = p;
  r.p_c = critical_probability(k);
  const int side = compare(NumberField::create(k)->from_rational(p), *r.p_c);
  r.regime = side > 0 ? Regime::supercritical : side == 0 ? Regime::critical : Regime::subcritical;
  if (sgn(p) == 0) return r;  // P_k = X^{2k-2}(X^2 - lambda X + 1) has no positive root
  r.alpha = positive_root(build_Pk(k, p), width);
  if (r.regime == Regime::supercritical) r.rate = growth_function(k, p, r.alpha->interval());
  return r;
}

/// (lambda + sqrt(lambda^2 + 4(2p-1))) / 2 for lambda >= 2.
inline GrowthReport growth_rate_large_lambda(const Rational& lambda, const Rational& p) {
  if (lambda < 2) throw DomainError("growth_rate_large_lambda: lambda must be >= 2");
  if (p <= 0 || p > 1) throw DomainError("growth_rate_large_lambda: p must lie in (0, 1]");
  GrowthReport r;
  r.lambda = lambda;
  r.p = p;
  r.regime = Regime::large_lambda;
  const Interval root = interval::sqrt(lambda * lambda + 4 * (2 * p - 1));
  r.rate = interval::scale(interval::add(interval::point(lambda), root), Rational(1, 2));
  return r;
}

// ---------------------------------------------------------------------------
// Non-analyticity at lambda_k and the p = 1/2 case
// ---------------------------------------------------------------------------

struct AnalyticityGap {
  /// alpha^{2k-2} Q(f(alpha)) with Q(Y) = Y^2 - lambda Y - (2p-1).
  Interval lhs;
  /// 2 p q^{k-1} (alpha^k + p q^{k-1}).
  Interval rhs;
  /// X^{2k-2} Q(X + c X^{1-k}) - P_k(X) == 2c (X^k + c) as polynomials.
  bool identity_exact = false;
  bool positive = false;
};

inline AnalyticityGap analyticity_gap(int k, const Rational& p, const Rational& width = default_root_width()) {
  detail::check_spectral_args(k, p);
  if (p == 1) throw DomainError("analyticity_gap: p = 1 makes the gap vanish identically");
  const GrowthReport g = growth_rate_k(k, p, width);
  if (g.regime != Regime::supercritical) throw DomainError("analyticity_gap: needs p > p_c");
  const FieldPtr f = NumberField::create(k);
  const FieldElement lambda = f->generator();
  const Rational c = p * pow(1 - p, static_cast<unsigned>(k - 1));
  const auto kk = static_cast<std::size_t>(k);

  // X^{2k-2} Q(X + c X^{1-k}) = X^{2k} + 2c X^k + c^2 - lambda X^{2k-1} - lambda c X^{k-1} - (2p-1) X^{2k-2}
  std::vector<FieldElement> lifted(2 * kk + 1, f->zero());
  lifted[2 * kk] = f->one();
  lifted[2 * kk - 1] = -lambda;
  lifted[2 * kk - 2] = f->from_rational(1 - 2 * p);
  lifted[kk] += f->from_rational(2 * c);
  lifted[kk - 1] -= lambda * c;
  lifted[0] += f->from_rational(c * c);
  std::vector<FieldElement> gap(kk + 1, f->zero());
  gap[kk] = f->from_rational(2 * c);
  gap[0] = f->from_rational(2 * c * c);

  AnalyticityGap r;
  r.identity_exact = FieldPolynomial(lifted) - build_Pk(k, p) == FieldPolynomial(gap);

  const Interval alpha = g.alpha->interval();
  const Interval lam = lambda.enclosure(160);
  const Interval grown = growth_function(k, p, alpha);
  Interval q_at = interval::sub(interval::sub(interval::mul(grown, grown), interval::mul(lam, grown)),
                                interval::point(2 * p - 1));
  r.lhs = interval::mul(interval::pow(alpha, static_cast<unsigned>(2 * k - 2)), q_at);
  r.rhs = interval::scale(interval::add(interval::pow(alpha, static_cast<unsigned>(k)), interval::point(c)), 2 * c);
  r.positive = r.rhs.lo > 0;
  return r;
}

struct HalfCase {
  int k = 3;
  /// Positive root of X^k - lambda X^{k-1} - 2^{-k}.
  RootBracket alpha;
  /// 2 alpha - lambda.
  Interval rate;
  /// P_k = (X^k + 2^{-k}) Q_k exactly.
  bool factorization_exact = false;
  /// 0 < alpha - lambda < 2^{-k}, by exact signs of Q_k at lambda and lambda + 2^{-k}.
  bool bound_ok = false;
};

inline FieldPolynomial half_case_factor(int k) {
  const FieldPtr f = NumberField::create(k);
  std::vector<FieldElement> c(static_cast<std::size_t>(k) + 1, f->zero());
  c.back() = f->one();
  c[static_cast<std::size_t>(k) - 1] = -f->generator();
  c[0] = f->from_rational(-Rational(1, Integer(1) << k));
  return FieldPolynomial(std::move(c));
}

inline HalfCase half_case(int k, const Rational& width = default_root_width()) {
  if (k < 3) throw DomainError("k must be >= 3");
  const FieldPtr f = NumberField::create(k);
  const FieldPolynomial qk = half_case_factor(k);
  const Rational eps(1, Integer(1) << k);
  FieldPolynomial shift = FieldPolynomial::monomial(f->one(), static_cast<std::size_t>(k)) +
                          FieldPolynomial({f->from_rational(eps)});
  HalfCase r;
  r.k = k;
  r.factorization_exact = shift * qk == build_Pk(k, Rational(1, 2));
  const FieldElement lambda = f->generator();
  r.bound_ok = qk(lambda).sign() < 0 && qk(lambda + eps).sign() > 0;
  r.alpha = positive_root(qk, width);
  r.rate = interval::sub(interval::scale(r.alpha.interval(), Rational(2)), lambda.enclosure(160));
  return r;
}

/// One row of a p-sweep.
struct SweepRow {
  Rational p;
  GrowthReport report;
};

/// lo, lo + step, ..., up to hi (inclusive).
inline std::vector<SweepRow> sweep_k(int k, const Rational& lo, const Rational& hi, const Rational& step,
                                     const Rational& width = Rational(1, Integer(1) << 40)) {
  if (step <= 0) throw DomainError("sweep: step must be positive");
  if (lo > hi) throw DomainError("sweep: lo must be <= hi");
  std::vector<SweepRow> rows;
  for (Rational p = lo; p <= hi; p += step) rows.push_back({p, growth_rate_k(k, p, width)});
  return rows;
}

}  // namespace rfib
