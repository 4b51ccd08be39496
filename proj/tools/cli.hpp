#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfib/rfib.hpp"

namespace rfib::cli {

enum ExitCode { ok = 0, failure = 1, usage = 2 };

/// Bad user input detected after parsing; reported as a usage error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "lambda", a rational ("3", "1/2", "0.25"), or coefficients over powers of
/// lambda separated by commas ("1,1/2" is 1 + lambda/2).
inline FieldElement parse_value(const FieldPtr& f, const std::string& text, bool allow_lambda) {
  const auto t = std::string(detail::trim(text));
  if (t == "lambda" || t == "L") {
    if (!allow_lambda) throw UsageError("value 'lambda' needs --k");
    return f->generator();
  }
  try {
    if (t.find(',') == std::string::npos) return f->from_rational(parse_rational(t));
    std::vector<Rational> c;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      c.push_back(parse_rational(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!allow_lambda && c.size() > 1) throw UsageError("coefficient lists need --k");
    return f->from_coefficients(std::move(c));
  } catch (const std::invalid_argument& e) {
    throw UsageError("cannot parse value '" + t + "': " + e.what());
  }
}

inline Rational parse_exact(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(flag + ": expected a rational such as 1/2 or 0.25, got '" + text + "'");
  }
}

inline Rational parse_probability(const std::string& text) {
  Rational p = parse_exact(text, "--p");
  if (p < 0 || p > 1) throw UsageError("--p must lie in [0, 1]");
  return p;
}

struct Grid {
  Rational lo, hi, step;
};

inline Grid parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos) throw UsageError("--p-grid expects lo:hi:step");
  Grid g{parse_exact(text.substr(0, first), "--p-grid"), parse_exact(text.substr(first + 1, second - first - 1), "--p-grid"),
         parse_exact(text.substr(second + 1), "--p-grid")};
  if (g.step <= 0 || g.lo > g.hi || g.lo < 0 || g.hi > 1) throw UsageError("--p-grid needs 0 <= lo <= hi <= 1 and step > 0");
  return g;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Expected growth of random Fibonacci sequences g_{n+1} = |lambda g_n +- g_{n-1}|", "rfib"};
  app.require_subcommand(1);
  std::string output_path;
  app.add_option("-o,--output", output_path, "Write results to FILE instead of standard output");

  // Shared option holders.
  int k = 0;
  std::string lambda_text, p_text = "1/2", a_text = "1", b_text = "1";
  int n = 20;

  auto* growth = app.add_subcommand("growth", "Growth rate of m_n (JSON report)");
  growth->add_option("--k", k, "Use lambda = 2cos(pi/k), k >= 3");
  growth->add_option("--lambda", lambda_text, "Rational lambda >= 2");
  growth->add_option("--p", p_text, "Probability of the + sign (rational)")->required();

  auto* expect = app.add_subcommand("expect", "Exact expectations m_2..m_N (CSV: n, exact, decimal, ratio)");
  std::string method = "decomp";
  expect->add_option("--k", k, "Use lambda = 2cos(pi/k), k >= 3");
  expect->add_option("--lambda", lambda_text, "Rational lambda");
  expect->add_option("--p", p_text, "Probability of the + sign")->required();
  expect->add_option("--a", a_text, "g_1 (rational, 'lambda', or coefficients c0,c1,...)");
  expect->add_option("--b", b_text, "g_2");
  expect->add_option("--n", n, "Last index N")->required();
  expect->add_option("--method", method, "brute | reduced | decomp")
      ->check(CLI::IsMember({"brute", "reduced", "decomp"}));

  auto* triangle = app.add_subcommand("triangle", "Generalized Pascal triangle c_{n,m} (CSV)");
  int rows = 18;
  triangle->add_option("--k", k, "Column spacing k >= 1")->required();
  triangle->add_option("--rows", rows, "Number of rows (n = 0..rows-1)");

  auto* leftbranch = app.add_subcommand("leftbranch", "All-minus branch and its circle radii (CSV)");
  leftbranch->add_option("--k", k, "k >= 3")->required();
  leftbranch->add_option("--a", a_text, "l_1");
  leftbranch->add_option("--b", b_text, "l_2");
  leftbranch->add_option("--n", n, "Number of terms");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo paths (JSON summary)");
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string csv_path;
  simulate->add_option("--k", k, "Use lambda = 2cos(pi/k)");
  simulate->add_option("--lambda", lambda_text, "Real lambda > 0");
  simulate->add_option("--p", p_text, "Probability of the + sign");
  simulate->add_option("--a", a_text, "g_1");
  simulate->add_option("--b", b_text, "g_2");
  simulate->add_option("--n", n, "Path length (last index)");
  simulate->add_option("--paths", paths, "Number of paths");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
  simulate->add_option("--csv", csv_path, "Also write per-n statistics to this CSV file");

  auto* verify = app.add_subcommand("verify", "Exact identity suite; exit 1 on the first failure");
  std::vector<int> verify_ks{3, 4, 5};
  std::vector<std::string> verify_ps{"1/3", "1/2", "3/4"};
  int verify_n = 14;
  verify->add_option("--k", verify_ks, "Values of k");
  verify->add_option("--p", verify_ps, "Values of p");
  verify->add_option("--n", verify_n, "Deepest row");

  auto* scan = app.add_subcommand("scan", "Growth-rate sweep over p (CSV: p, p_c, regime, rate)");
  std::string grid_text;
  scan->add_option("--k", k, "k >= 3")->required();
  scan->add_option("--p-grid", grid_text, "lo:hi:step")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return usage;
  }

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) {
      err << "error: cannot open " << output_path << " for writing\n";
      return usage;
    }
  }
  std::ostream& os = output_path.empty() ? out : file;

  auto field_for = [&]() -> FieldPtr {
    if (k != 0 && !lambda_text.empty()) throw UsageError("give either --k or --lambda, not both");
    if (k != 0) {
      if (k < 3) throw UsageError("--k must be >= 3");
      return NumberField::create(k);
    }
    return NumberField::rationals();
  };

  try {
    if (*growth) {
      const Rational p = parse_probability(p_text);
      GrowthReport report;
      if (!lambda_text.empty()) {
        if (k != 0) throw UsageError("give either --k or --lambda, not both");
        const Rational lambda = parse_exact(lambda_text, "--lambda");
        if (lambda < 2) throw UsageError("--lambda must be >= 2 (use --k for lambda = 2cos(pi/k))");
        if (sgn(p) == 0) throw UsageError("--p must be positive when lambda >= 2");
        report = growth_rate_large_lambda(lambda, p);
      } else {
        if (k < 3) throw UsageError("growth needs --k >= 3 or --lambda >= 2");
        report = growth_rate_k(k, p);
      }
      os << io::to_json(report).dump(2) << "\n";
      return ok;
    }

    if (*expect) {
      const Rational p = parse_probability(p_text);
      if (n < 2) throw UsageError("--n must be >= 2");
      if (k == 0 && lambda_text.empty()) throw UsageError("expect needs --k or --lambda");
      const FieldPtr f = field_for();
      const bool symbolic = k != 0;
      const FieldElement a = parse_value(f, a_text, symbolic);
      const FieldElement b = parse_value(f, b_text, symbolic);
      if (a.sign() < 0 || b.sign() < 0 || (a.is_zero() && b.is_zero())) {
        throw UsageError("--a and --b must be nonnegative and not both zero");
      }
      std::vector<FieldElement> values;
      if (symbolic) {
        if (method == "brute") {
          values = brute_force_expectations(a, b, p, f->generator(), n);
        } else if (method == "reduced") {
          values = expectations_by_reduced_enumeration(k, p, a, b, n);
        } else {
          values = expectations_by_decomposition(k, p, a, b, n);
        }
      } else {
        const Rational lambda_r = parse_exact(lambda_text, "--lambda");
        if (lambda_r <= 0) throw UsageError("--lambda must be positive");
        const FieldElement lambda = f->from_rational(lambda_r);
        if (method == "brute") {
          values = brute_force_expectations(a, b, p, lambda, n);
        } else if (method == "decomp") {
          if (lambda_r < 2) throw UsageError("--method decomp with --lambda needs lambda >= 2");
          values = large_lambda_expectations(lambda, p, a, b, n);
        } else {
          throw UsageError("--method reduced needs --k (reduced trees exist only for lambda = 2cos(pi/k))");
        }
      }
      io::write_expectations_csv(os, values);
      return ok;
    }

    if (*triangle) {
      if (k < 1) throw UsageError("--k must be >= 1");
      if (rows < 1) throw UsageError("--rows must be >= 1");
      io::write_triangle_csv(os, PascalTriangle(k, rows));
      return ok;
    }

    if (*leftbranch) {
      if (k < 3) throw UsageError("--k must be >= 3");
      if (n < 3) throw UsageError("--n must be >= 3");
      const FieldPtr f = NumberField::create(k);
      const FieldElement a = parse_value(f, a_text, true);
      const FieldElement b = parse_value(f, b_text, true);
      if (a.sign() < 0 || b.sign() < 0 || (a.is_zero() && b.is_zero())) {
        throw UsageError("--a and --b must be nonnegative and not both zero");
      }
      const LeftBranch branch = ell_sequence(k, a, b, static_cast<std::size_t>(n));
      const RadiusCertificate cert = radius_certificate(branch);
      io::write_leftbranch_csv(os, branch, cert);
      if (!cert.nonincreasing || !cert.bounded) {
        err << "certificate failed at index " << cert.first_violation.value_or(0) + 1 << "\n";
        return failure;
      }
      return ok;
    }

    if (*simulate) {
      SimConfig cfg;
      if (k != 0 && !lambda_text.empty()) throw UsageError("give either --k or --lambda, not both");
      if (k != 0) {
        if (k < 3) throw UsageError("--k must be >= 3");
        cfg.k = k;
      } else if (!lambda_text.empty()) {
        cfg.lambda = to_double(parse_exact(lambda_text, "--lambda"));
      } else {
        throw UsageError("simulate needs --k or --lambda");
      }
      cfg.p = to_double(parse_probability(p_text));
      cfg.a = to_double(parse_exact(a_text, "--a"));
      cfg.b = to_double(parse_exact(b_text, "--b"));
      if (paths == 0) throw UsageError("--paths must be >= 1");
      if (n < 2) throw UsageError("--n must be >= 2");
      cfg.path_count = paths;
      cfg.path_length = n;
      cfg.rng_seed = seed;
      cfg.threads = threads;
      const SimStats stats = sample_paths(cfg);
      os << io::to_json(stats, jensen_report(stats)).dump(2) << "\n";
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw UsageError("cannot open " + csv_path + " for writing");
        io::write_simulation_csv(csv, stats);
      }
      return ok;
    }

    if (*verify) {
      std::vector<Rational> ps;
      for (const auto& t : verify_ps) ps.push_back(parse_probability(t));
      for (int kk : verify_ks) {
        if (kk < 3) throw UsageError("--k values must be >= 3");
      }
      if (verify_n < 4) throw UsageError("--n must be >= 4");
      std::size_t checks = 0;
      for (int kk : verify_ks) {
        const FieldPtr f = NumberField::create(kk);
        for (const auto& p : ps) {
          for (const auto& pair : default_initial_pairs()) {
            const IdentityReport r = verify_identities(kk, p, pair.a(f), pair.b(f), verify_n);
            checks += r.checks;
            if (!r.ok()) {
              os << "FAIL " << pair.name << " " << *r.first_failure << "\n";
              return failure;
            }
            os << "ok k=" << kk << " p=" << to_fraction_string(p) << " " << pair.name << " (" << r.checks
               << " checks)\n";
          }
        }
      }
      os << "all " << checks << " exact checks passed\n";
      return ok;
    }

    if (*scan) {
      if (k < 3) throw UsageError("--k must be >= 3");
      const Grid g = parse_grid(grid_text);
      io::write_sweep_csv(os, sweep_k(k, g.lo, g.hi, g.step));
      return ok;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
  return usage;
}

}  // namespace rfib::cli
