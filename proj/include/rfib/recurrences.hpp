#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rfib/leftbranch.hpp"
#include "rfib/number_field.hpp"
#include "rfib/trees.hpp"

namespace rfib {

// ---------------------------------------------------------------------------
// Reduced-tree row averages M(pi_n), M(pi_n^i)
// ---------------------------------------------------------------------------

namespace detail {

inline void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("probability p must lie in [0, 1]");
}

inline void check_k(int k, const FieldElement& x) {
  if (k < 3) throw DomainError("k must be >= 3");
  if (x.field()->k() != k) throw ContractError("value does not lie in Q(lambda_" + std::to_string(k) + ")");
}

}  // namespace detail

/// Row 2 of R_k(a, b): all mass in class k-2.
inline RowAverages reduced_row2(int k, const FieldElement& a, const FieldElement& b) {
  detail::check_k(k, b);
  (void)a;
  RowAverages r{2, std::vector<FieldElement>(static_cast<std::size_t>(k - 1), b.field()->zero()), b};
  r.by_class.back() = b;
  return r;
}

/// Row 3 of R_k(a, b): the right child (b, lambda b + a) of weight p.
inline RowAverages reduced_row3(int k, const Rational& p, const FieldElement& a, const FieldElement& b) {
  detail::check_k(k, b);
  FieldElement m = (b.times_generator() + a) * p;
  RowAverages r{3, std::vector<FieldElement>(static_cast<std::size_t>(k - 1), b.field()->zero()), m};
  r.by_class.front() = m;
  return r;
}

/// Class averages of row n from rows n-1 and n-2 (n >= 4):
///   M(pi_n^0) = lambda p M(pi_{n-1}) + p M(pi_{n-2}) - pq M(pi_{n-2}^{k-2})
///   M(pi_n^1) = lambda q M(pi_{n-1}^0) - pq M(pi_{n-2})
///   M(pi_n^i) = lambda q M(pi_{n-1}^{i-1}) - q^2 M(pi_{n-2}^{i-2}),  2 <= i <= k-2
inline RowAverages step_lemma_moy(const RowAverages& prev, const RowAverages& prev2, int k, const Rational& p,
                                  const FieldElement& lambda) {
  if (prev.n != prev2.n + 1) throw ContractError("step_lemma_moy: rows must be consecutive");
  if (prev.n + 1 < 4) throw ContractError("step_lemma_moy: needs n >= 4 (rows 2 and 3 follow the convention)");
  const std::size_t classes = static_cast<std::size_t>(k - 1);
  if (prev.by_class.size() != classes || prev2.by_class.size() != classes) {
    throw ContractError("step_lemma_moy: class vectors must have k-1 entries");
  }
  detail::check_probability(p);
  const Rational q = 1 - p;
  const Rational pq = p * q;
  const detail::LambdaMultiplier times_lambda(lambda);
  std::vector<FieldElement> c;
  c.reserve(classes);
  c.push_back(times_lambda(prev.total) * p + prev2.total * p - prev2.by_class[classes - 1] * pq);
  c.push_back(times_lambda(prev.by_class[0]) * q - prev2.total * pq);
  const Rational q2 = q * q;
  for (std::size_t i = 2; i < classes; ++i) {
    c.push_back(times_lambda(prev.by_class[i - 1]) * q - prev2.by_class[i - 2] * q2);
  }
  FieldElement total = c[0];
  for (std::size_t i = 1; i < classes; ++i) total += c[i];
  return {prev.n + 1, std::move(c), std::move(total)};
}

/// Next total from the last 2k totals (oldest first, newest = M(pi_{n-1})):
///   M(pi_n) = lambda M(pi_{n-1}) + (2p-1) M(pi_{n-2})
///             + p q^{k-1} lambda M(pi_{n-k-1}) + p^2 q^{2k-2} M(pi_{n-2k})
inline FieldElement master_recursion(std::span<const FieldElement> history, int k, const Rational& p,
                                     const FieldElement& lambda) {
  const std::size_t s = history.size();
  if (s < static_cast<std::size_t>(2 * k)) throw ContractError("master_recursion: needs the last 2k totals");
  const Rational q = 1 - p;
  const Rational c = p * pow(q, static_cast<unsigned>(k - 1));
  const detail::LambdaMultiplier times_lambda(lambda);
  return times_lambda(history[s - 1] + history[s - static_cast<std::size_t>(k) - 1] * c) +
         history[s - 2] * Rational(2 * p - 1) + history[s - static_cast<std::size_t>(2 * k)] * Rational(c * c);
}

/// Class averages of rows 2..n_max of R_k(a, b) via step_lemma_moy; result[i] is row i + 2.
inline std::vector<RowAverages> reduced_averages(int k, const Rational& p, const FieldElement& a,
                                                 const FieldElement& b, int n_max) {
  detail::check_probability(p);
  std::vector<RowAverages> rows;
  rows.push_back(reduced_row2(k, a, b));
  if (n_max >= 3) rows.push_back(reduced_row3(k, p, a, b));
  const FieldElement lambda = b.field()->generator();
  for (int n = 4; n <= n_max; ++n) {
    rows.push_back(step_lemma_moy(rows[rows.size() - 1], rows[rows.size() - 2], k, p, lambda));
  }
  return rows;
}

/// Totals M(pi_2..pi_{n_max}) of R_k(a, b): rows up to 2k+1 from the class
/// recursion, then the master recursion. result[i] is row i + 2.
inline std::vector<FieldElement> reduced_totals(int k, const Rational& p, const FieldElement& a,
                                                const FieldElement& b, int n_max) {
  const int seed_rows = std::min(n_max, 2 * k + 1);
  std::vector<FieldElement> totals;
  for (auto& r : reduced_averages(k, p, a, b, seed_rows)) totals.push_back(std::move(r.total));
  const FieldElement lambda = b.field()->generator();
  totals.reserve(static_cast<std::size_t>(std::max(n_max - 1, 1)));
  for (int n = 2 * k + 2; n <= n_max; ++n) totals.push_back(master_recursion(totals, k, p, lambda));
  return totals;
}

/// Checks the three identities tying class averages of rows n, n-1, n-2, n-k
/// (n >= k+2). `rows[i]` must hold row i + 2.
inline std::optional<std::string> check_intermediate_identities(int n, int k, const Rational& p,
                                                                std::span<const RowAverages> rows) {
  if (n < k + 2) throw ContractError("intermediate identities need n >= k+2");
  if (static_cast<int>(rows.size()) < n - 1) throw ContractError("intermediate identities: missing rows");
  auto row = [&](int m) -> const RowAverages& { return rows[static_cast<std::size_t>(m - 2)]; };
  const FieldElement lambda = row(n).total.field()->generator();
  const Rational q = 1 - p;
  const Rational pqk2 = p * pow(q, static_cast<unsigned>(k - 2));
  const std::size_t top = static_cast<std::size_t>(k - 2);
  const std::size_t below = static_cast<std::size_t>(k - 3);

  FieldElement lhs = row(n - 2).by_class[below] * q - lambda * row(n - 1).by_class[top];
  if (lhs != row(n - k).total * pqk2) return "class k-3/k-2 identity fails at n=" + std::to_string(n);

  FieldElement rhs = (row(n - k).total - row(n - k).by_class[top] * q) * pqk2;
  if (row(n).by_class[top] != rhs) return "class k-2 identity fails at n=" + std::to_string(n);

  FieldElement total = lambda * row(n - 1).total + row(n - 2).total * Rational(2 * p - 1) +
                       row(n - k).total * Rational(pqk2 * q) + row(n - 2).by_class[top] * Rational((q - p) * q);
  if (row(n).total != total) return "total recursion (order k) fails at n=" + std::to_string(n);
  return std::nullopt;
}

inline bool intermediate_identities(int n, int k, const Rational& p, std::span<const RowAverages> rows) {
  return !check_intermediate_identities(n, k, p, rows).has_value();
}

/// Checks every reduced-tree identity on a family of rows (rows[i] = row i + 2):
/// the class recursion, the three order-k identities and the master recursion.
inline std::optional<std::string> check_reduced_identities(int k, const Rational& p, std::span<const RowAverages> rows) {
  if (rows.empty()) return std::nullopt;
  const FieldElement lambda = rows.front().total.field()->generator();
  const int n_max = static_cast<int>(rows.size()) + 1;
  auto row = [&](int m) -> const RowAverages& { return rows[static_cast<std::size_t>(m - 2)]; };
  for (int n = 4; n <= n_max; ++n) {
    RowAverages next = step_lemma_moy(row(n - 1), row(n - 2), k, p, lambda);
    for (std::size_t i = 0; i < next.by_class.size(); ++i) {
      if (next.by_class[i] != row(n).by_class[i]) {
        return "class recursion fails at n=" + std::to_string(n) + ", class " + std::to_string(i);
      }
    }
  }
  for (int n = k + 2; n <= n_max; ++n) {
    if (auto failure = check_intermediate_identities(n, k, p, rows)) return failure;
  }
  std::vector<FieldElement> totals;
  for (const auto& r : rows) totals.push_back(r.total);
  for (int n = 2 * k + 2; n <= n_max; ++n) {
    std::span<const FieldElement> history(totals.data(), static_cast<std::size_t>(n - 2));
    if (master_recursion(history, k, p, lambda) != row(n).total) {
      return "master recursion fails at n=" + std::to_string(n);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generalized Pascal triangle c_{n,m} = C(n,m) - (k-1) C(n,m-1)
// ---------------------------------------------------------------------------

inline Integer pascal_coeff(long n, long m, int k) {
  if (k < 1) throw DomainError("pascal_coeff: k must be >= 1");
  if (n < 0 || m < 0 || m > n / k) {
    throw DomainError("pascal_coeff: need 0 <= m <= floor(n/k), got n=" + std::to_string(n) + ", m=" + std::to_string(m));
  }
  return binomial(n, m) - Integer(k - 1) * binomial(n, m - 1);
}

/// Triangle built column by column: column m starts at row mk with
/// c_{mk,m} = c_{mk-1,m-1}, then follows c_{n+1,m} = c_{n,m} + c_{n,m-1}.
class PascalTriangle {
 public:
  PascalTriangle(int k, int rows) : k_(k) {
    if (k < 1) throw DomainError("PascalTriangle: k must be >= 1");
    for (int n = 0; n < rows; ++n) {
      std::vector<Integer> row(static_cast<std::size_t>(n / k + 1));
      row[0] = 1;
      for (int m = 1; m <= n / k; ++m) {
        const auto& above = table_[static_cast<std::size_t>(n - 1)];
        const auto mm = static_cast<std::size_t>(m);
        row[mm] = n == m * k ? above[mm - 1] : above[mm] + above[mm - 1];
      }
      table_.push_back(std::move(row));
    }
  }

  int k() const { return k_; }
  int rows() const { return static_cast<int>(table_.size()); }
  const std::vector<Integer>& row(int n) const { return table_.at(static_cast<std::size_t>(n)); }
  const Integer& at(int n, int m) const { return row(n).at(static_cast<std::size_t>(m)); }

 private:
  int k_;
  std::vector<std::vector<Integer>> table_;
};

// ---------------------------------------------------------------------------
// Expectation m_n = M(psi_n) of the full tree
// ---------------------------------------------------------------------------

/// Reduced trees R_k(l_{s+1}, l_{s+2}) hanging off the left branch.
///
/// Row averages are linear in the initial pair, so M(pi_{n,s}) is assembled
/// from the two basis trees R_k(1, 0) and R_k(0, 1).
class ShiftedTreeFamily {
 public:
  ShiftedTreeFamily(int k, Rational p, FieldElement a, FieldElement b)
      : k_(k), p_(std::move(p)), a_(std::move(a)), b_(std::move(b)) {
    detail::check_k(k_, b_);
    detail::check_probability(p_);
    ell_ = left_branch_values(a_, b_, b_.field()->generator(), 2);
  }

  int k() const { return k_; }
  const Rational& p() const { return p_; }

  /// l_s for s >= 1.
  const FieldElement& ell(std::size_t s) {
    const FieldElement lambda = b_.field()->generator();
    while (ell_.size() < s) {
      const std::size_t m = ell_.size();
      ell_.push_back(abs(ell_[m - 1].times_generator() - ell_[m - 2]));
    }
    (void)lambda;
    return ell_[s - 1];
  }

  std::pair<FieldElement, FieldElement> initial_pair(std::size_t s) { return {ell(s + 1), ell(s + 2)}; }

  /// M(pi_{n,s}): total of row n of R_k(l_{s+1}, l_{s+2}).
  FieldElement average(int n, std::size_t s) {
    if (n < 2) throw ContractError("ShiftedTreeFamily: rows start at n = 2");
    ensure_basis(n);
    const auto i = static_cast<std::size_t>(n - 2);
    return ell(s + 1) * basis_from_a_[i] + ell(s + 2) * basis_from_b_[i];
  }

  /// Same quantity recomputed from scratch with the class recursion.
  RowAverages averages_from_scratch(int n, std::size_t s) {
    auto [x, y] = initial_pair(s);
    return reduced_averages(k_, p_, x, y, n).back();
  }

 private:
  void ensure_basis(int n_max) {
    if (static_cast<int>(basis_from_a_.size()) + 1 >= n_max) return;
    const FieldPtr& f = b_.field();
    const int target = std::max(n_max, 2 * static_cast<int>(basis_from_a_.size()) + 2);
    basis_from_a_ = reduced_totals(k_, p_, f->one(), f->zero(), target);
    basis_from_b_ = reduced_totals(k_, p_, f->zero(), f->one(), target);
  }

  int k_;
  Rational p_;
  FieldElement a_;
  FieldElement b_;
  std::vector<FieldElement> ell_;
  std::vector<FieldElement> basis_from_a_;
  std::vector<FieldElement> basis_from_b_;
};

inline constexpr int kMaxDecompositionRow = 20000;

/// m_2 .. m_{n_max} by the decomposition
///   M(psi_{n+2}) = sum_m sum_s c_{n,m} (p q^{k-1})^m q^s M(pi_{n+2-s-km, s}).
/// The inner s-sum depends only on t = n - km and is computed once per t.
/// result[i] is m_{i+2}.
inline std::vector<FieldElement> expectations_by_decomposition(int k, const Rational& p, const FieldElement& a,
                                                               const FieldElement& b, int n_max) {
  if (n_max < 2) throw DomainError("expectations: n_max must be >= 2");
  if (n_max > kMaxDecompositionRow) throw ResourceError("decomposition limited to rows <= " + std::to_string(kMaxDecompositionRow));
  ShiftedTreeFamily family(k, p, a, b);
  const Rational q = 1 - p;
  const Rational removal_weight = p * pow(q, static_cast<unsigned>(k - 1));
  const int n_top = n_max - 2;
  const FieldPtr& f = b.field();

  // inner[t] = sum_{s=0}^{t} q^s M(pi_{t+2-s, s})
  std::vector<FieldElement> inner;
  inner.reserve(static_cast<std::size_t>(n_top + 1));
  for (int t = 0; t <= n_top; ++t) {
    FieldElement sum = f->zero();
    Rational qs(1);
    for (int s = 0; s <= t; ++s) {
      if (sgn(qs) == 0) break;
      sum += family.average(t + 2 - s, static_cast<std::size_t>(s)) * qs;
      qs *= q;
    }
    inner.push_back(std::move(sum));
  }

  std::vector<Rational> removal_powers{Rational(1)};
  std::vector<FieldElement> result;
  result.reserve(static_cast<std::size_t>(n_top + 1));
  for (int n = 0; n <= n_top; ++n) {
    FieldElement m_n = f->zero();
    for (int m = 0; m <= n / k; ++m) {
      while (static_cast<int>(removal_powers.size()) <= m) removal_powers.push_back(removal_powers.back() * removal_weight);
      const Rational weight = Rational(pascal_coeff(n, m, k)) * removal_powers[static_cast<std::size_t>(m)];
      if (sgn(weight) == 0) continue;
      m_n += inner[static_cast<std::size_t>(n - k * m)] * weight;
    }
    result.push_back(std::move(m_n));
  }
  return result;
}

/// M(psi_{n+2}) for a single n.
inline FieldElement expectation_by_decomposition(int n, int k, const Rational& p, const FieldElement& a,
                                                 const FieldElement& b) {
  if (n < 0) throw DomainError("expectation_by_decomposition: n must be >= 0");
  return expectations_by_decomposition(k, p, a, b, n + 2).back();
}

/// Same decomposition, but every M(pi_{n,s}) comes from enumerating the
/// reduced tree R_k(l_{s+1}, l_{s+2}) edge by edge.
inline std::vector<FieldElement> expectations_by_reduced_enumeration(int k, const Rational& p, const FieldElement& a,
                                                                     const FieldElement& b, int n_max,
                                                                     std::size_t budget = kDefaultEdgeBudget) {
  if (n_max < 2) throw DomainError("expectations: n_max must be >= 2");
  detail::check_k(k, b);
  detail::check_probability(p);
  const int n_top = n_max - 2;
  const Rational q = 1 - p;
  const Rational removal_weight = p * pow(q, static_cast<unsigned>(k - 1));
  std::vector<FieldElement> ell = left_branch_values(a, b, b.field()->generator(), static_cast<std::size_t>(n_top + 2));
  // averages[s][r - 2] = M(pi_{r,s}) for r <= n_max - s
  std::vector<std::vector<FieldElement>> averages;
  for (int s = 0; s <= n_top; ++s) {
    std::vector<FieldElement> col;
    for (const auto& row : reduced_tree_rows(ell[static_cast<std::size_t>(s)], ell[static_cast<std::size_t>(s + 1)], k, p,
                                             n_max - s, budget)) {
      col.push_back(row.edges.empty() ? b.field()->zero() : row_average(row));
    }
    averages.push_back(std::move(col));
  }
  std::vector<FieldElement> result;
  for (int n = 0; n <= n_top; ++n) {
    FieldElement m_n = b.field()->zero();
    for (int m = 0; m <= n / k; ++m) {
      const Rational cm = Rational(pascal_coeff(n, m, k)) * pow(removal_weight, static_cast<unsigned>(m));
      for (int s = 0; s <= n - k * m; ++s) {
        const int r = n + 2 - s - k * m;
        m_n += averages[static_cast<std::size_t>(s)][static_cast<std::size_t>(r - 2)] *
               Rational(cm * pow(q, static_cast<unsigned>(s)));
      }
    }
    result.push_back(std::move(m_n));
  }
  return result;
}

/// m_2 .. m_{n_max} by enumerating the full tree T_lambda(a, b).
inline std::vector<FieldElement> brute_force_expectations(const FieldElement& a, const FieldElement& b,
                                                          const Rational& p, const FieldElement& lambda, int n_max,
                                                          std::size_t budget = kDefaultEdgeBudget) {
  if (n_max < 2) throw DomainError("expectations: n_max must be >= 2");
  detail::check_probability(p);
  detail::check_full_tree_budget(n_max, budget);
  std::vector<FieldElement> result;
  Row row = initial_row(a, b);
  result.push_back(row_average(row));
  while (row.n < n_max) {
    row = expand_full_row(row, p, lambda, budget);
    result.push_back(row_average(row));
  }
  return result;
}

/// m_n = lambda m_{n-1} + (2p-1) m_{n-2}, valid on T_lambda(a, b) when lambda >= 2 and b >= a.
inline FieldElement large_lambda_recursion(const FieldElement& m_prev, const FieldElement& m_prev2,
                                           const FieldElement& lambda, const Rational& p) {
  return lambda * m_prev + m_prev2 * Rational(2 * p - 1);
}

/// m_2 .. m_{n_max} for lambda >= 2 and any nonnegative (a, b) != (0, 0).
///
/// For b >= a the two-term recursion applies directly. Otherwise the tree is
/// split into its left branch and the well-ordered subtrees
/// T(l_{j+2}, lambda l_{j+2} + l_{j+1}) hanging off it:
///   m_N = q^{N-2} l_N + sum_{j=0}^{N-3} q^j p E_j(N-j-1).
inline std::vector<FieldElement> large_lambda_expectations(const FieldElement& lambda, const Rational& p,
                                                           const FieldElement& a, const FieldElement& b, int n_max) {
  if (n_max < 2) throw DomainError("expectations: n_max must be >= 2");
  if (compare(lambda, lambda.field()->from_rational(2)) < 0) throw DomainError("large-lambda expectations need lambda >= 2");
  detail::check_probability(p);
  if (a.sign() < 0 || b.sign() < 0 || (a.is_zero() && b.is_zero())) {
    throw DomainError("initial values must be nonnegative and not both zero");
  }
  const FieldPtr& f = b.field();
  if (compare(b, a) >= 0) {
    std::vector<FieldElement> m{b};
    FieldElement prev2 = a;
    while (static_cast<int>(m.size()) + 1 < n_max) {
      FieldElement next = large_lambda_recursion(m.back(), prev2, lambda, p);
      prev2 = m.back();
      m.push_back(std::move(next));
    }
    return m;
  }
  // Basis sequences of the two-term recursion started from (m_1, m_2) = (1, 0) and (0, 1).
  std::vector<FieldElement> u{f->one(), f->zero()}, v{f->zero(), f->one()};
  while (static_cast<int>(u.size()) < n_max) {
    u.push_back(large_lambda_recursion(u.back(), u[u.size() - 2], lambda, p));
    v.push_back(large_lambda_recursion(v.back(), v[v.size() - 2], lambda, p));
  }
  const auto ell = left_branch_values(a, b, lambda, static_cast<std::size_t>(n_max));
  const Rational q = 1 - p;
  // subtree j has initial pair (l_{j+2}, lambda l_{j+2} + l_{j+1})
  std::vector<std::pair<FieldElement, FieldElement>> pairs;
  for (int j = 0; j + 3 <= n_max; ++j) {
    const auto& lj2 = ell[static_cast<std::size_t>(j + 1)];
    const auto& lj1 = ell[static_cast<std::size_t>(j)];
    pairs.emplace_back(lj2, lambda * lj2 + lj1);
  }
  std::vector<FieldElement> m;
  for (int n = 2; n <= n_max; ++n) {
    FieldElement sum = ell[static_cast<std::size_t>(n - 1)] * pow(q, static_cast<unsigned>(n - 2));
    Rational weight = p;
    for (int j = 0; j + 3 <= n; ++j) {
      if (sgn(weight) == 0) break;
      const auto r = static_cast<std::size_t>(n - j - 1);  // row inside the subtree
      const auto& [x, y] = pairs[static_cast<std::size_t>(j)];
      sum += (x * u[r - 1] + y * v[r - 1]) * weight;
      weight *= q;
    }
    m.push_back(std::move(sum));
  }
  return m;
}

enum class ExpectationMethod { brute, reduced, decomp };

}  // namespace rfib
