#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rfib/polynomial.hpp"
#include "rfib/rational.hpp"

namespace rfib {

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  Rational width() const { return hi - lo; }
  double midpoint() const { return Rational((lo + hi) / 2).get_d(); }
  /// Half-width rounded up to a double.
  double radius() const {
    double r = Rational((hi - lo) / 2).get_d();
    return std::nextafter(r, std::numeric_limits<double>::infinity());
  }
};

inline int euler_totient(int n) {
  int result = n;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      while (n % f == 0) n /= f;
      result -= result / f;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

/// p_k with p_0 = 2, p_1 = x, p_{j+1} = x p_j - p_{j-1}; p_k(2cos t) = 2cos(kt).
inline RationalPolynomial chebyshev_companion(int k) {
  RationalPolynomial prev({Rational(2)});
  if (k == 0) return prev;
  RationalPolynomial cur({Rational(0), Rational(1)});
  const RationalPolynomial x({Rational(0), Rational(1)});
  for (int j = 1; j < k; ++j) {
    RationalPolynomial next = x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace detail {

inline int sign_at(const RationalPolynomial& f, const Rational& x) { return sgn(f(x)); }

inline RationalPolynomial minimal_polynomial_impl(int k) {
  if (k == 1) return RationalPolynomial({Rational(2), Rational(1)});  // 2cos(pi) = -2
  if (k == 2) return RationalPolynomial({Rational(0), Rational(1)});  // 2cos(pi/2) = 0
  RationalPolynomial f = chebyshev_companion(k) + RationalPolynomial({Rational(2)});
  RationalPolynomial squarefree = divmod(f, gcd(f, f.derivative())).first;
  // Roots of p_k + 2 are 2cos(j pi / k) for odd j; grouping them by reduced
  // denominator d (with k/d odd) splits the squarefree part into mu_d factors.
  for (int d = 1; d < k; ++d) {
    if (k % d != 0 || (k / d) % 2 == 0) continue;
    auto [quot, rem] = divmod(squarefree, minimal_polynomial_impl(d));
    if (!rem.is_zero()) throw ArithmeticError("inexact factor division while building minimal polynomial");
    squarefree = std::move(quot);
  }
  return scale(squarefree, Rational(Rational(1) / squarefree.leading()));
}

}  // namespace detail

/// Minimal polynomial of 2cos(pi/k) over Q (monic, integer coefficients).
inline RationalPolynomial minimal_polynomial(int k) {
  if (k < 3) throw DomainError("minimal_polynomial: k must be >= 3, got " + std::to_string(k));
  RationalPolynomial mu = detail::minimal_polynomial_impl(k);
  if (mu.degree() != euler_totient(2 * k) / 2) {
    throw ArithmeticError("minimal_polynomial: unexpected degree for k=" + std::to_string(k));
  }
  for (const auto& c : mu.coeffs()) {
    if (c.get_den() != 1) throw ArithmeticError("minimal_polynomial: non-integer coefficient");
  }
  const double root = 2.0 * std::cos(std::numbers::pi / k);
  const Rational eps(1, Integer(1) << 40);
  const Rational guess(root);
  if (mu.degree() > 1 && detail::sign_at(mu, guess - eps) * detail::sign_at(mu, guess + eps) >= 0) {
    throw ArithmeticError("minimal_polynomial: factor does not vanish at 2cos(pi/k)");
  }
  return mu;
}

class FieldElement;

/// The real number field Q(lambda_k), lambda_k = 2cos(pi/k), k >= 3.
///
/// Elements are reduced modulo the minimal polynomial, so zero testing is a
/// coefficient check. Signs of nonzero elements come from interval
/// evaluation against a dyadic bracket of lambda_k that is refined lazily.
class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  static std::shared_ptr<const NumberField> create(int k) {
    if (k < 3) throw DomainError("number field: k must be >= 3, got " + std::to_string(k));
    return std::shared_ptr<const NumberField>(new NumberField(k));
  }

  /// Q itself; identical to Q(lambda_3) since lambda_3 = 1.
  static std::shared_ptr<const NumberField> rationals() { return create(3); }

  int k() const { return k_; }
  int degree() const { return degree_; }
  const RationalPolynomial& minimal_polynomial() const { return minpoly_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_rational(const Rational& r) const;
  /// The generator lambda_k.
  FieldElement generator() const;
  FieldElement from_coefficients(std::vector<Rational> coeffs) const;

  // Power enclosures of lambda_k at a fixed dyadic scale 2^bits:
  // lambda^i lies in [lower[i], upper[i]] / 2^bits.
  struct PowerTable {
    int bits = 0;
    std::vector<Integer> lower;
    std::vector<Integer> upper;
  };

  /// Table for precision level `level` (bits = 64 * 2^level).
  const PowerTable& power_table(int level) const {
    std::lock_guard<std::mutex> lock(mutex_);
    while (static_cast<int>(tables_.size()) <= level) {
      const int bits = 64 << tables_.size();
      refine_bracket(bits);
      tables_.push_back(std::make_unique<PowerTable>(make_table(bits)));
    }
    return *tables_[static_cast<std::size_t>(level)];
  }

  /// Current lambda bracket refined to width <= 2^-bits.
  Interval lambda_bracket(int bits) const {
    std::lock_guard<std::mutex> lock(mutex_);
    refine_bracket(bits);
    return bracket_;
  }

 private:
  explicit NumberField(int k) : k_(k), minpoly_(rfib::minimal_polynomial(k)) {
    degree_ = minpoly_.degree();
    const double root = 2.0 * std::cos(std::numbers::pi / k);
    if (degree_ == 1) {
      bracket_ = {-minpoly_.coeff(0), -minpoly_.coeff(0)};
    } else {
      const Rational eps(1, Integer(1) << 40);
      bracket_ = {Rational(root) - eps, Rational(root) + eps};
      lower_sign_ = detail::sign_at(minpoly_, bracket_.lo);
    }
  }

  void refine_bracket(int bits) const {
    if (degree_ == 1) return;
    const Rational target(1, Integer(1) << bits);
    while (bracket_.hi - bracket_.lo > target) {
      Rational mid = (bracket_.lo + bracket_.hi) / 2;
      const int s = detail::sign_at(minpoly_, mid);
      if (s == 0) {
        bracket_ = {mid, mid};
        return;
      }
      if (s == lower_sign_) {
        bracket_.lo = std::move(mid);
      } else {
        bracket_.hi = std::move(mid);
      }
    }
  }

  PowerTable make_table(int bits) const {
    PowerTable t;
    t.bits = bits;
    const Integer scale_factor = Integer(1) << bits;
    Integer lo_num = bracket_.lo.get_num() * scale_factor;
    Integer lo;
    mpz_fdiv_q(lo.get_mpz_t(), lo_num.get_mpz_t(), bracket_.lo.get_den().get_mpz_t());
    Integer hi_num = bracket_.hi.get_num() * scale_factor;
    Integer hi;
    mpz_cdiv_q(hi.get_mpz_t(), hi_num.get_mpz_t(), bracket_.hi.get_den().get_mpz_t());
    // lambda_k > 0 for k >= 3, so powers of the bracket are monotone.
    Integer lo_pow = scale_factor, hi_pow = scale_factor;
    for (int i = 0; i < degree_; ++i) {
      t.lower.push_back(lo_pow);
      t.upper.push_back(hi_pow);
      Integer next_lo = lo_pow * lo;
      mpz_fdiv_q_2exp(lo_pow.get_mpz_t(), next_lo.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
      Integer next_hi = hi_pow * hi;
      mpz_cdiv_q_2exp(hi_pow.get_mpz_t(), next_hi.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    }
    return t;
  }

  int k_;
  int degree_ = 0;
  RationalPolynomial minpoly_;
  mutable std::mutex mutex_;
  mutable Interval bracket_;
  mutable int lower_sign_ = 0;
  mutable std::vector<std::unique_ptr<PowerTable>> tables_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Exact element of Q(lambda_k): coefficients of 1, lambda, ..., lambda^{d-1}.
class FieldElement {
 public:
  FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (!field_) throw ContractError("field element without a field");
    reduce();
  }

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (sgn(c) != 0) return false;
    }
    return true;
  }

  /// True when the element lies in Q.
  bool is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      if (sgn(coeffs_[i]) != 0) return false;
    }
    return true;
  }
  const Rational& rational_part() const { return coeffs_[0]; }

  /// Enclosure at dyadic precision 64 * 2^level bits.
  Interval enclosure_at_level(int level) const {
    if (is_rational()) return {coeffs_[0], coeffs_[0]};
    const auto& table = field_->power_table(level);
    Integer lo(0), hi(0), term;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      const Rational& c = coeffs_[i];
      const int s = sgn(c);
      if (s == 0) continue;
      const Integer& num = c.get_num();
      const Integer& den = c.get_den();
      const Integer& for_lo = s > 0 ? table.lower[i] : table.upper[i];
      const Integer& for_hi = s > 0 ? table.upper[i] : table.lower[i];
      Integer prod = num * for_lo;
      mpz_fdiv_q(term.get_mpz_t(), prod.get_mpz_t(), den.get_mpz_t());
      lo += term;
      prod = num * for_hi;
      mpz_cdiv_q(term.get_mpz_t(), prod.get_mpz_t(), den.get_mpz_t());
      hi += term;
    }
    const Integer scale_factor = Integer(1) << table.bits;
    Rational rlo(lo, scale_factor), rhi(hi, scale_factor);
    rlo.canonicalize();
    rhi.canonicalize();
    return {rlo, rhi};
  }

  /// Enclosure whose width is at most about 2^-bits times the coefficient scale.
  Interval enclosure(int bits) const {
    int level = 0;
    while ((64 << level) < bits) ++level;
    return enclosure_at_level(level);
  }

  int sign() const {
    if (is_rational()) return sgn(coeffs_[0]);
    for (int level = 0; level < 16; ++level) {
      Interval iv = enclosure_at_level(level);
      if (sgn(iv.lo) > 0) return 1;
      if (sgn(iv.hi) < 0) return -1;
    }
    throw ArithmeticError("sign: precision limit reached for a nonzero element");
  }

  double to_double() const {
    if (is_rational()) return coeffs_[0].get_d();
    return enclosure_at_level(0).midpoint();
  }

  FieldElement operator-() const {
    std::vector<Rational> c = coeffs_;
    for (auto& x : c) x = -x;
    return FieldElement(field_, std::move(c), NoReduce{});
  }

  FieldElement& operator+=(const FieldElement& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  FieldElement& operator*=(const Rational& r) {
    for (auto& x : coeffs_) x *= r;
    return *this;
  }
  FieldElement& operator*=(const FieldElement& o) {
    *this = *this * o;
    return *this;
  }
  FieldElement& operator/=(const FieldElement& o) {
    *this = *this / o;
    return *this;
  }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const Rational& r) { return a *= r; }
  friend FieldElement operator*(const Rational& r, FieldElement a) { return a *= r; }
  friend FieldElement operator+(FieldElement a, const Rational& r) {
    a.coeffs_[0] += r;
    return a;
  }
  friend FieldElement operator-(FieldElement a, const Rational& r) {
    a.coeffs_[0] -= r;
    return a;
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check_same_field(b);
    const std::size_t d = a.coeffs_.size();
    if (d == 1) return FieldElement(a.field_, {a.coeffs_[0] * b.coeffs_[0]}, NoReduce{});
    if (b.is_rational()) return a * b.coeffs_[0];
    if (a.is_rational()) return b * a.coeffs_[0];
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (sgn(a.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (sgn(b.coeffs_[j]) == 0) continue;
        prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return FieldElement(a.field_, std::move(prod));
  }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

  /// Multiplication by the generator lambda_k (a shift plus one reduction step).
  FieldElement times_generator() const {
    std::vector<Rational> c(coeffs_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i];
    return FieldElement(field_, std::move(c));
  }

  FieldElement inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero in Q(lambda_" + std::to_string(field_->k()) + ")");
    if (is_rational()) return FieldElement(field_, {Rational(1) / coeffs_[0]});
    auto [g, u] = half_extended_gcd(RationalPolynomial(coeffs_), field_->minimal_polynomial());
    if (g.degree() != 0) throw ArithmeticError("inverse: element shares a factor with the minimal polynomial");
    return FieldElement(field_, u.coeffs());
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->k() == b.field_->k() && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
    bool first = true;
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
      const Rational& c = x.coeffs_[i];
      if (sgn(c) == 0) continue;
      if (!first) os << (sgn(c) < 0 ? " - " : " + ");
      const Rational magnitude = first ? c : Rational(abs(c));
      if (i == 0) {
        os << magnitude;
      } else {
        if (magnitude == -1) {
          os << "-";
        } else if (magnitude != 1) {
          os << magnitude << "*";
        }
        os << "L";
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    if (first) os << "0";
    return os;
  }

 private:
  struct NoReduce {};
  FieldElement(FieldPtr field, std::vector<Rational> coeffs, NoReduce) : field_(std::move(field)), coeffs_(std::move(coeffs)) {}

  void check_same_field(const FieldElement& o) const {
    if (field_ != o.field_ && field_->k() != o.field_->k()) {
      throw ContractError("mixing elements of Q(lambda_" + std::to_string(field_->k()) + ") and Q(lambda_" +
                          std::to_string(o.field_->k()) + ")");
    }
  }

  void reduce() {
    const auto& mu = field_->minimal_polynomial().coeffs();
    const std::size_t d = mu.size() - 1;
    for (std::size_t i = coeffs_.size(); i-- > d;) {
      if (sgn(coeffs_[i]) == 0) continue;
      const Rational c = coeffs_[i];
      for (std::size_t j = 0; j < d; ++j) {
        if (sgn(mu[j]) != 0) coeffs_[i - d + j] -= c * mu[j];
      }
    }
    coeffs_.resize(d, Rational(0));
  }

  FieldPtr field_;
  std::vector<Rational> coeffs_;
};

inline FieldElement NumberField::zero() const { return FieldElement(shared_from_this(), {Rational(0)}); }
inline FieldElement NumberField::one() const { return FieldElement(shared_from_this(), {Rational(1)}); }
inline FieldElement NumberField::from_rational(const Rational& r) const { return FieldElement(shared_from_this(), {r}); }
inline FieldElement NumberField::generator() const {
  return FieldElement(shared_from_this(), {Rational(0), Rational(1)});
}
inline FieldElement NumberField::from_coefficients(std::vector<Rational> coeffs) const {
  if (coeffs.empty()) coeffs.push_back(Rational(0));
  return FieldElement(shared_from_this(), std::move(coeffs));
}

inline bool is_zero(const FieldElement& x) { return x.is_zero(); }
inline FieldElement zero_like(const FieldElement& x) { return x.field()->zero(); }
inline FieldElement one_like(const FieldElement& x) { return x.field()->one(); }

inline int sign(const FieldElement& x) { return x.sign(); }
inline int compare(const FieldElement& a, const FieldElement& b) { return (a - b).sign(); }
inline FieldElement abs(const FieldElement& x) { return x.sign() < 0 ? -x : x; }

inline FieldElement pow(const FieldElement& base, unsigned exponent) {
  FieldElement result = base.field()->one();
  FieldElement b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1u;
  }
  return result;
}

/// lambda_k = 2cos(pi/k) as the generator of a freshly built field.
inline FieldElement lambda_k(int k) { return NumberField::create(k)->generator(); }

}  // namespace rfib
