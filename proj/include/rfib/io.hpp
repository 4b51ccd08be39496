#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfib/leftbranch.hpp"
#include "rfib/recurrences.hpp"
#include "rfib/simulate.hpp"
#include "rfib/spectral.hpp"
#include "rfib/trees.hpp"

namespace rfib::io {

using json = nlohmann::json;

inline std::string decimal(double x, int digits = 17) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

/// Field element as its coefficient list ["c_0", "c_1", ...] over powers of lambda.
inline json to_json(const FieldElement& x) {
  json a = json::array();
  for (const auto& c : x.coeffs()) a.push_back(to_fraction_string(c));
  return a;
}

inline FieldElement field_element_from_json(const FieldPtr& f, const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("field element must be a nonempty array of \"num/den\" strings");
  std::vector<Rational> c;
  for (const auto& v : j) c.push_back(parse_rational(v.get<std::string>()));
  return f->from_coefficients(std::move(c));
}

inline std::string exact_string(const FieldElement& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline json to_json(const Interval& iv) {
  return {{"lo", to_fraction_string(iv.lo)}, {"hi", to_fraction_string(iv.hi)}};
}

inline json to_json(const GrowthReport& g) {
  json j;
  if (g.k) j["k"] = *g.k;
  if (g.lambda) j["lambda"] = to_fraction_string(*g.lambda);
  j["p"] = to_fraction_string(g.p);
  if (g.p_c) {
    j["p_c"] = {{"exact", exact_string(*g.p_c)}, {"coefficients", to_json(*g.p_c)}, {"decimal", g.p_c->to_double()}};
  } else {
    j["p_c"] = nullptr;
  }
  j["regime"] = to_string(g.regime);
  if (g.alpha) {
    j["alpha_k"] = {{"lo", to_fraction_string(g.alpha->lo)},
                    {"hi", to_fraction_string(g.alpha->hi)},
                    {"decimal", g.alpha->decimal()}};
  } else {
    j["alpha_k"] = nullptr;
  }
  if (g.rate) {
    j["rate"] = g.rate_decimal();
    j["rate_error_bound"] = g.rate_error_bound();
  } else {
    j["rate"] = nullptr;
    j["rate_error_bound"] = nullptr;
  }
  return j;
}

/// One JSON object per edge: {alpha, beta, weight, class}.
inline void write_row_jsonl(std::ostream& os, const Row& row) {
  for (const auto& e : row.edges) {
    json j{{"n", row.n},
           {"alpha", to_json(e.label.alpha)},
           {"beta", to_json(e.label.beta)},
           {"weight", to_fraction_string(e.weight)},
           {"class", e.left_order}};
    os << j.dump() << '\n';
  }
}

inline void write_triangle_csv(std::ostream& os, const PascalTriangle& t) {
  os << "n";
  const int width = (t.rows() - 1) / t.k() + 1;
  for (int m = 0; m < width; ++m) os << ",m" << m;
  os << '\n';
  for (int n = 0; n < t.rows(); ++n) {
    os << n;
    for (const auto& c : t.row(n)) os << ',' << c;
    os << '\n';
  }
}

/// Columns n, exact, decimal, ratio (m_n / m_{n-1}); values[i] is m_{i+2}.
inline void write_expectations_csv(std::ostream& os, const std::vector<FieldElement>& values) {
  os << "n,exact,decimal,ratio\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i].to_double();
    os << i + 2 << ",\"" << exact_string(values[i]) << "\"," << decimal(v) << ',';
    if (i > 0 && !values[i - 1].is_zero()) os << decimal(v / values[i - 1].to_double());
    os << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "p,p_c,regime,rate\n";
  for (const auto& r : rows) {
    os << to_fraction_string(r.p) << ',' << decimal(r.report.p_c->to_double()) << ',' << to_string(r.report.regime)
       << ',';
    if (r.report.rate) os << decimal(r.report.rate_decimal());
    os << '\n';
  }
}

inline void write_simulation_csv(std::ostream& os, const SimStats& s) {
  os << "n,mean,se,mean_log,se_log,skipped_zeros\n";
  for (const auto& pt : s.points) {
    os << pt.n << ',' << decimal(pt.mean) << ',' << decimal(pt.se) << ',' << decimal(pt.mean_log) << ','
       << decimal(pt.se_log) << ',' << pt.skipped_zeros << '\n';
  }
}

inline json to_json(const SimStats& s, const JensenReport& jensen) {
  const SimPoint& last = s.points.back();
  return {{"paths", s.paths},
          {"lambda", s.lambda},
          {"n", last.n},
          {"mean", last.mean},
          {"se", last.se},
          {"variance", last.variance},
          {"mean_log", last.mean_log},
          {"se_log", last.se_log},
          {"skipped_zeros", last.skipped_zeros},
          {"jensen",
           {{"log_of_mean_per_step", jensen.log_of_mean},
            {"mean_of_log_per_step", jensen.mean_of_log},
            {"gap", jensen.gap},
            {"gap_nonnegative", jensen.gap_nonnegative}}}};
}

/// Columns n, ell_decimal, ell_exact, R (radius of the circle through (l_n, l_{n+1})).
inline void write_leftbranch_csv(std::ostream& os, const LeftBranch& branch, const RadiusCertificate& cert) {
  os << "n,ell,ell_exact,R\n";
  for (std::size_t i = 0; i < branch.values.size(); ++i) {
    os << i + 1 << ',' << decimal(branch.values[i].to_double()) << ",\"" << exact_string(branch.values[i]) << "\",";
    if (i < cert.radii.size()) os << decimal(cert.radii[i]);
    os << '\n';
  }
}

}  // namespace rfib::io
