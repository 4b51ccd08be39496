#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rfib/number_field.hpp"

namespace rfib {

/// l_1 = a, l_2 = b, l_n = |lambda l_{n-1} - l_{n-2}|: the all-minus trajectory.
struct LeftBranch {
  int k = 3;
  FieldElement a;
  FieldElement b;
  std::vector<FieldElement> values;  // values[i] = l_{i+1}

  const FieldElement& ell(std::size_t n) const { return values.at(n - 1); }
};

/// l_1 .. l_count for an arbitrary lambda (exact zero test through sign()).
inline std::vector<FieldElement> left_branch_values(const FieldElement& a, const FieldElement& b,
                                                   const FieldElement& lambda, std::size_t count) {
  if (a.is_zero() && b.is_zero()) throw DomainError("left branch: (a, b) must not both be zero");
  if (a.sign() < 0 || b.sign() < 0) throw DomainError("left branch: initial values must be nonnegative");
  std::vector<FieldElement> v;
  v.reserve(count);
  if (count >= 1) v.push_back(a);
  if (count >= 2) v.push_back(b);
  while (v.size() < count) {
    const std::size_t m = v.size();
    v.push_back(abs(lambda * v[m - 1] - v[m - 2]));
  }
  return v;
}

inline LeftBranch ell_sequence(int k, const FieldElement& a, const FieldElement& b, std::size_t n) {
  if (n < 2) throw DomainError("ell_sequence: n must be >= 2");
  if (a.field()->k() != k || b.field()->k() != k) throw ContractError("ell_sequence: values must lie in Q(lambda_k)");
  return {k, a, b, left_branch_values(a, b, a.field()->generator(), n)};
}

/// Circle through M, M' with abscissae x, x' and oriented angle (OM, OM') = theta.
struct CirclePoint {
  double radius = 0.0;
  /// Argument of M, in [-pi/2, pi/2).
  double t = 0.0;
};

inline CirclePoint circle_radius(double x, double x_next, double theta) {
  if (x < 0 || x_next < 0) throw DomainError("circle_radius: abscissae must be nonnegative");
  if (x == 0 && x_next == 0) throw DomainError("circle_radius: (x, x') must not both be zero");
  if (!(theta > 0 && theta < std::numbers::pi)) throw DomainError("circle_radius: theta must lie in (0, pi)");
  if (x == 0) return {x_next / std::sin(theta), -std::numbers::pi / 2};
  const double tan_t = (std::cos(theta) - x_next / x) / std::sin(theta);
  const double t = std::atan(tan_t);
  return {x / std::cos(t), t};
}

/// R^2 for the pair (x, x') with theta = pi/k, exactly:
/// R^2 sin^2(theta) = x^2 + x'^2 - lambda x x'.
inline FieldElement squared_radius(const FieldElement& x, const FieldElement& x_next) {
  const FieldPtr& f = x.field();
  const FieldElement lambda = f->generator();
  const FieldElement sin_sq = f->one() - lambda * lambda * Rational(1, 4);
  return (x * x + x_next * x_next - lambda * x * x_next) / sin_sq;
}

struct RadiusCertificate {
  /// squared_radii[i], radii[i]: circle through (l_{i+1}, l_{i+2}).
  std::vector<FieldElement> squared_radii;
  std::vector<double> radii;
  bool nonincreasing = true;
  /// l_n <= first radius for every computed n.
  bool bounded = true;
  std::optional<std::size_t> first_violation;
};

/// Radius sequence of the shrinking-circle argument. Comparisons are exact
/// sign tests on squared radii, which lie in Q(lambda_k).
inline RadiusCertificate radius_certificate(const LeftBranch& branch) {
  if (branch.values.size() < 3) throw DomainError("radius_certificate: branch needs at least 3 terms");
  RadiusCertificate cert;
  const auto& v = branch.values;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    FieldElement r2 = squared_radius(v[i], v[i + 1]);
    cert.radii.push_back(std::sqrt(std::max(0.0, r2.to_double())));
    if (i > 0 && compare(r2, cert.squared_radii.back()) > 0) {
      cert.nonincreasing = false;
      if (!cert.first_violation) cert.first_violation = i;
    }
    cert.squared_radii.push_back(std::move(r2));
  }
  const FieldElement& first = cert.squared_radii.front();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (compare(v[i] * v[i], first) > 0) {
      cert.bounded = false;
      if (!cert.first_violation) cert.first_violation = i;
    }
  }
  return cert;
}

}  // namespace rfib
