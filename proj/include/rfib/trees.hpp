#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rfib/number_field.hpp"

namespace rfib {

/// Edge label (alpha, beta): parent value and child value.
struct EdgeLabel {
  FieldElement alpha;
  FieldElement beta;

  friend bool operator==(const EdgeLabel& a, const EdgeLabel& b) { return a.alpha == b.alpha && a.beta == b.beta; }
};

struct WeightedEdge {
  EdgeLabel label;
  Rational weight;
  /// Number of consecutive left steps ending at this edge (0 for a right child).
  int left_order = 0;
};

/// All edges at depth n; the initial edge is the only edge in row 2.
struct Row {
  int n = 2;
  std::vector<WeightedEdge> edges;
};

/// (M(pi_n^0), ..., M(pi_n^{k-2})) and their sum.
struct RowAverages {
  int n = 2;
  std::vector<FieldElement> by_class;
  FieldElement total;
};

inline constexpr std::size_t kDefaultEdgeBudget = std::size_t{1} << 22;

/// 2x2 matrix acting on row vectors: (alpha, beta) * M.
class LRMatrix {
 public:
  LRMatrix(FieldElement a, FieldElement b, FieldElement c, FieldElement d)
      : m_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

  static LRMatrix left(const FieldElement& lambda) {
    auto f = lambda.field();
    return LRMatrix(f->zero(), f->from_rational(-1), f->one(), lambda);
  }
  static LRMatrix right(const FieldElement& lambda) {
    auto f = lambda.field();
    return LRMatrix(f->zero(), f->one(), f->one(), lambda);
  }
  static LRMatrix identity(const FieldPtr& f) { return LRMatrix(f->one(), f->zero(), f->zero(), f->one()); }

  const FieldElement& at(int r, int c) const { return m_[static_cast<std::size_t>(2 * r + c)]; }
  FieldElement determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  friend LRMatrix operator*(const LRMatrix& x, const LRMatrix& y) {
    return LRMatrix(x.at(0, 0) * y.at(0, 0) + x.at(0, 1) * y.at(1, 0), x.at(0, 0) * y.at(0, 1) + x.at(0, 1) * y.at(1, 1),
                    x.at(1, 0) * y.at(0, 0) + x.at(1, 1) * y.at(1, 0), x.at(1, 0) * y.at(0, 1) + x.at(1, 1) * y.at(1, 1));
  }
  friend bool operator==(const LRMatrix& x, const LRMatrix& y) { return x.m_ == y.m_; }

  EdgeLabel apply(const EdgeLabel& v) const {
    return {v.alpha * at(0, 0) + v.beta * at(1, 0), v.alpha * at(0, 1) + v.beta * at(1, 1)};
  }

 private:
  std::array<FieldElement, 4> m_;
};

namespace detail {

// Multiplies by lambda; when lambda is the field generator a shift suffices.
class LambdaMultiplier {
 public:
  explicit LambdaMultiplier(const FieldElement& lambda)
      : lambda_(lambda), is_generator_(lambda.coeffs().size() > 1 && lambda == lambda.field()->generator()) {}
  FieldElement operator()(const FieldElement& x) const { return is_generator_ ? x.times_generator() : lambda_ * x; }

 private:
  FieldElement lambda_;
  bool is_generator_;
};

/// Row n of the full tree has 2^{n-2} edges; fail before building anything.
inline void check_full_tree_budget(int n_max, std::size_t budget) {
  if (n_max - 2 >= 63 || (std::size_t{1} << (n_max - 2)) > budget) {
    throw ResourceError("full tree down to row " + std::to_string(n_max) + " exceeds the edge budget of " +
                        std::to_string(budget));
  }
}

inline void check_budget(std::size_t size, std::size_t budget) {
  if (size > budget) {
    throw ResourceError("tree enumeration needs " + std::to_string(size) + " edges, budget is " +
                        std::to_string(budget));
  }
}

}  // namespace detail

/// Row 2 of T_lambda(a,b) or R_k(a,b): the single edge (a, b) of weight 1.
inline Row initial_row(const FieldElement& a, const FieldElement& b, int initial_class = 0) {
  if (a.is_zero() && b.is_zero()) throw DomainError("initial values (a, b) must not both be zero");
  Row row;
  row.n = 2;
  row.edges.push_back({{a, b}, Rational(1), initial_class});
  return row;
}

/// One row of the full tree: right child (beta, lambda*beta + alpha) with
/// weight p*w, left child (beta, |lambda*beta - alpha|) with weight q*w.
inline Row expand_full_row(const Row& row, const Rational& p, const FieldElement& lambda,
                           std::size_t budget = kDefaultEdgeBudget) {
  if (p < 0 || p > 1) throw DomainError("probability p must lie in [0, 1]");
  detail::check_budget(2 * row.edges.size(), budget);
  const Rational q = 1 - p;
  const detail::LambdaMultiplier times_lambda(lambda);
  Row next;
  next.n = row.n + 1;
  next.edges.reserve(2 * row.edges.size());
  for (const auto& e : row.edges) {
    FieldElement lb = times_lambda(e.label.beta);
    next.edges.push_back({{e.label.beta, lb + e.label.alpha}, Rational(p * e.weight), 0});
    next.edges.push_back({{e.label.beta, abs(lb - e.label.alpha)}, Rational(q * e.weight), e.left_order + 1});
  }
  return next;
}

/// M(X): sum of beta * weight over the row.
inline FieldElement row_average(const Row& row) {
  if (row.edges.empty()) throw ContractError("row_average of an empty row");
  FieldElement sum = row.edges.front().label.beta.field()->zero();
  for (const auto& e : row.edges) sum += e.label.beta * e.weight;
  return sum;
}

/// One row of the reduced tree R_k: edges of class k-2 only get a right child;
/// left children use the linear map (alpha, beta) L without absolute value.
inline Row expand_reduced_row(const Row& row, int k, const Rational& p, std::size_t budget = kDefaultEdgeBudget) {
  if (p < 0 || p > 1) throw DomainError("probability p must lie in [0, 1]");
  if (row.edges.empty()) return Row{row.n + 1, {}};
  const FieldPtr& field = row.edges.front().label.beta.field();
  if (field->k() != k) throw ContractError("expand_reduced_row: labels live in Q(lambda_" + std::to_string(field->k()) + ")");
  const Rational q = 1 - p;
  std::size_t size = 0;
  for (const auto& e : row.edges) size += e.left_order >= k - 2 ? 1 : 2;
  detail::check_budget(size, budget);
  Row next;
  next.n = row.n + 1;
  next.edges.reserve(size);
  for (const auto& e : row.edges) {
    FieldElement lb = e.label.beta.times_generator();
    next.edges.push_back({{e.label.beta, lb + e.label.alpha}, Rational(p * e.weight), 0});
    if (e.left_order < k - 2) {
      next.edges.push_back({{e.label.beta, lb - e.label.alpha}, Rational(q * e.weight), e.left_order + 1});
    }
  }
  return next;
}

/// Rows 2..n_max of T_lambda(a, b); result[i] is row i + 2.
inline std::vector<Row> full_tree_rows(const FieldElement& a, const FieldElement& b, const Rational& p,
                                       const FieldElement& lambda, int n_max, std::size_t budget = kDefaultEdgeBudget) {
  detail::check_full_tree_budget(n_max, budget);
  std::vector<Row> rows;
  rows.push_back(initial_row(a, b));
  while (rows.back().n < n_max) rows.push_back(expand_full_row(rows.back(), p, lambda, budget));
  return rows;
}

/// Number of edges of R_k in row n_max (row 2 has one edge, of class k-2).
inline Integer reduced_row_size(int k, int n_max) {
  std::vector<Integer> by_class(static_cast<std::size_t>(k - 1), Integer(0));
  by_class.back() = 1;
  for (int n = 3; n <= n_max; ++n) {
    Integer total = 0;
    for (const auto& c : by_class) total += c;
    for (std::size_t i = by_class.size() - 1; i > 0; --i) by_class[i] = by_class[i - 1];
    by_class[0] = total;
  }
  Integer total = 0;
  for (const auto& c : by_class) total += c;
  return total;
}

/// Rows 2..n_max of R_k(a, b); row 2 carries class k-2 by convention.
inline std::vector<Row> reduced_tree_rows(const FieldElement& a, const FieldElement& b, int k, const Rational& p,
                                          int n_max, std::size_t budget = kDefaultEdgeBudget) {
  if (reduced_row_size(k, n_max) > Integer(std::to_string(budget))) {
    throw ResourceError("reduced tree down to row " + std::to_string(n_max) + " exceeds the edge budget of " +
                        std::to_string(budget));
  }
  std::vector<Row> rows;
  rows.push_back(initial_row(a, b, k - 2));
  while (rows.back().n < n_max) rows.push_back(expand_reduced_row(rows.back(), k, p, budget));
  return rows;
}

/// Full-tree step rule (absolute value on left steps) applied to one label.
inline EdgeLabel right_child(const EdgeLabel& e, const FieldElement& lambda) {
  return {e.beta, lambda * e.beta + e.alpha};
}
inline EdgeLabel left_child(const EdgeLabel& e, const FieldElement& lambda) {
  return {e.beta, abs(lambda * e.beta - e.alpha)};
}

/// The (k-1)-th left child of the right child of an edge carries the edge's
/// own label again.
inline bool verify_return(const EdgeLabel& label, int k) {
  const FieldPtr& field = label.beta.field();
  if (field->k() != k) throw ContractError("verify_return: label field does not match k");
  const FieldElement lambda = field->generator();
  EdgeLabel cur = right_child(label, lambda);
  for (int j = 0; j < k - 1; ++j) cur = left_child(cur, lambda);
  return cur == label;
}

/// Class-by-class averages of a reduced-tree row.
inline RowAverages class_averages(const Row& row, int k) {
  if (row.edges.empty()) throw ContractError("class_averages of an empty row");
  const FieldPtr& field = row.edges.front().label.beta.field();
  RowAverages avg{row.n, std::vector<FieldElement>(static_cast<std::size_t>(k - 1), field->zero()), field->zero()};
  for (const auto& e : row.edges) {
    if (e.left_order < 0 || e.left_order > k - 2) throw ContractError("edge class outside [0, k-2]");
    FieldElement contribution = e.label.beta * e.weight;
    avg.by_class[static_cast<std::size_t>(e.left_order)] += contribution;
    avg.total += contribution;
  }
  return avg;
}

/// Checks beta >= alpha on every edge of T_lambda(a, b) down to row `depth`.
inline bool monotone_check_large_lambda(const FieldElement& a, const FieldElement& b, const FieldElement& lambda,
                                        int depth) {
  std::vector<EdgeLabel> frontier{{a, b}};
  for (int n = 2;; ++n) {
    for (const auto& e : frontier) {
      if (compare(e.beta, e.alpha) < 0) return false;
    }
    if (n >= depth) return true;
    std::vector<EdgeLabel> next;
    next.reserve(2 * frontier.size());
    for (const auto& e : frontier) {
      next.push_back(right_child(e, lambda));
      next.push_back(left_child(e, lambda));
    }
    frontier = std::move(next);
  }
}

}  // namespace rfib
