#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rfib/recurrences.hpp"
#include "rfib/trees.hpp"

namespace rfib {

/// Initial pair given symbolically so it can be rebuilt in each field.
struct InitialPair {
  std::string name;
  std::function<FieldElement(const FieldPtr&)> a;
  std::function<FieldElement(const FieldPtr&)> b;
};

inline std::vector<InitialPair> default_initial_pairs() {
  auto constant = [](long v) { return [v](const FieldPtr& f) { return f->from_rational(Rational(v)); }; };
  return {{"(1,1)", constant(1), constant(1)},
          {"(1,lambda)", constant(1), [](const FieldPtr& f) { return f->generator(); }},
          {"(2,3)", constant(2), constant(3)}};
}

struct IdentityReport {
  std::size_t checks = 0;
  std::optional<std::string> first_failure;

  bool ok() const { return !first_failure.has_value(); }
};

/// Exact identity suite on one configuration, rows up to n_max:
///  - brute-force M(psi_n) equals the reduced-tree decomposition (enumerated
///    reduced trees) and the fast decomposition;
///  - the class recursion, the order-k identities and the master recursion
///    hold on class averages taken from enumerated reduced-tree rows.
inline IdentityReport verify_identities(int k, const Rational& p, const FieldElement& a, const FieldElement& b,
                                        int n_max, std::size_t budget = kDefaultEdgeBudget) {
  IdentityReport report;
  const std::string where = "k=" + std::to_string(k) + " p=" + to_fraction_string(p) + ": ";
  auto fail = [&](const std::string& what) {
    if (!report.first_failure) report.first_failure = where + what;
  };
  const FieldElement lambda = b.field()->generator();

  const auto brute = brute_force_expectations(a, b, p, lambda, n_max, budget);
  const auto by_reduced = expectations_by_reduced_enumeration(k, p, a, b, n_max, budget);
  const auto fast = expectations_by_decomposition(k, p, a, b, n_max);
  for (std::size_t i = 0; i < brute.size(); ++i) {
    report.checks += 2;
    const std::string n = std::to_string(i + 2);
    if (brute[i] != by_reduced[i]) fail("decomposition over enumerated reduced trees differs from brute force at n=" + n);
    if (brute[i] != fast[i]) fail("fast decomposition differs from brute force at n=" + n);
  }

  std::vector<RowAverages> rows;
  for (const auto& row : reduced_tree_rows(a, b, k, p, n_max, budget)) rows.push_back(class_averages(row, k));
  const auto recursive = reduced_averages(k, p, a, b, n_max);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ++report.checks;
    if (rows[i].total != recursive[i].total) fail("reduced-row total differs from the class recursion at n=" + std::to_string(i + 2));
  }
  report.checks += rows.size() * 3;
  if (auto failure = check_reduced_identities(k, p, rows)) fail(*failure);
  return report;
}

}  // namespace rfib
