#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rfib {

using Integer = mpz_class;
using Rational = mpq_class;

// Error families used across the library.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw ArithmeticError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1u;
  }
  return result;
}

inline Integer binomial(long n, long m) {
  if (m < 0 || n < 0 || m > n) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
  return r;
}

/// Always "num/den", also for integers ("3/1").
inline std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline Integer parse_integer(std::string_view s) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
  if (digits.empty()) throw std::invalid_argument("empty integer");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("invalid integer '" + std::string(s) + "'");
    }
  }
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return Integer(text, 10);
}

}  // namespace detail

/// Parses "num/den", a plain integer, or a terminating decimal such as "0.3"
/// (converted exactly to 3/10).
inline Rational parse_rational(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parse_integer(s.substr(0, slash));
    Integer den = detail::parse_integer(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    bool negative = s.front() == '-';
    std::string_view body = s;
    if (body.front() == '-' || body.front() == '+') body.remove_prefix(1);
    dot = body.find('.');
    std::string whole(body.substr(0, dot));
    std::string frac(body.substr(dot + 1));
    if (whole.empty() && frac.empty()) throw std::invalid_argument("invalid decimal '" + std::string(s) + "'");
    for (char c : whole + frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("invalid decimal '" + std::string(s) + "'");
      }
    }
    Integer num(whole.empty() ? std::string("0") : whole, 10);
    Integer scale(1);
    for (char c : frac) {
      num = num * 10 + (c - '0');
      scale *= 10;
    }
    Rational r(negative ? Integer(-num) : num, scale);
    r.canonicalize();
    return r;
  }
  return Rational(detail::parse_integer(s));
}

}  // namespace rfib
