#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "rfib/rational.hpp"

namespace rfib {

namespace detail {
template <typename T>
bool coefficient_is_zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

// Dense univariate polynomial, coefficients stored constant term first.
//
// The coefficient type only needs ring operations plus the free functions
// is_zero / zero_like / one_like found by lookup (Rational and FieldElement
// provide them). The coefficient vector is never empty: the zero polynomial
// is stored as a single zero coefficient, which keeps a prototype around for
// coefficient types that carry context (field elements know their field).
template <typename T>
class Polynomial {
 public:
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ContractError("polynomial needs at least one coefficient");
    trim();
  }

  static Polynomial monomial(const T& coefficient, std::size_t degree) {
    std::vector<T> c(degree + 1, zero_like(coefficient));
    c[degree] = coefficient;
    return Polynomial(std::move(c));
  }

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return is_zero() ? -1 : static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && detail::coefficient_is_zero(coeffs_[0]); }

  const std::vector<T>& coeffs() const { return coeffs_; }
  T coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : zero_like(coeffs_[0]); }
  const T& leading() const { return coeffs_.back(); }
  T zero() const { return zero_like(coeffs_[0]); }

  /// Horner evaluation; X is any type that T can be multiplied by.
  template <typename X>
  T operator()(const X& x) const {
    T acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
      acc = acc * x + coeffs_[i];
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial({zero()});
    std::vector<T> d;
    d.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  /// Removes the largest power X^j dividing the polynomial; returns j.
  std::size_t strip_low_powers() {
    std::size_t j = 0;
    while (j + 1 < coeffs_.size() && detail::coefficient_is_zero(coeffs_[j])) ++j;
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(j));
    return j;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.zero());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.zero());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial({a.zero()});
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, a.zero());
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (detail::coefficient_is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }

  template <typename S>
  friend Polynomial scale(const Polynomial& a, const S& s) {
    std::vector<T> c = a.coeffs_;
    for (auto& x : c) x = x * s;
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
    }
    return true;
  }

  /// Euclidean division over a field of coefficients: a = q*b + r.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
    std::vector<T> rem = a.coeffs_;
    const int db = b.degree();
    if (a.degree() < db) return {Polynomial({a.zero()}), a};
    std::vector<T> quot(rem.size() - static_cast<std::size_t>(db), a.zero());
    const T inv_lead = one_like(b.leading()) / b.leading();
    for (std::size_t i = rem.size(); i-- > static_cast<std::size_t>(db);) {
      if (detail::coefficient_is_zero(rem[i])) continue;
      T factor = rem[i] * inv_lead;
      const std::size_t shift = i - static_cast<std::size_t>(db);
      quot[shift] = factor;
      for (int j = 0; j <= db; ++j) rem[shift + static_cast<std::size_t>(j)] -= factor * b.coeffs_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(std::max(db, 1)));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

 private:
  void trim() {
    while (coeffs_.size() > 1 && detail::coefficient_is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using RationalPolynomial = Polynomial<Rational>;

/// Monic gcd over Q.
inline RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return scale(a, Rational(1) / a.leading());
}

/// Returns (g, u) with u*a = g (mod m), g = gcd(a, m) monic.
inline std::pair<RationalPolynomial, RationalPolynomial> half_extended_gcd(const RationalPolynomial& a,
                                                                           const RationalPolynomial& m) {
  RationalPolynomial r0 = m, r1 = a;
  RationalPolynomial s0({Rational(0)}), s1({Rational(1)});
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    RationalPolynomial s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  const Rational inv = Rational(1) / r0.leading();
  return {scale(r0, inv), scale(s0, inv)};
}

}  // namespace rfib
