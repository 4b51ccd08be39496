#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "rfib/number_field.hpp"

namespace rfib {

struct SimConfig {
  /// Exactly one of k and lambda is used; k wins when both are set.
  std::optional<int> k;
  std::optional<double> lambda;
  double p = 0.5;
  double a = 1.0;
  double b = 1.0;
  std::size_t path_count = 10000;
  /// Largest index n of g_n (g_1 = a, g_2 = b).
  int path_length = 20;
  std::uint64_t rng_seed = 0;
  /// 0 picks hardware concurrency. Results do not depend on this.
  unsigned threads = 0;
};

struct SimPoint {
  int n = 1;
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;
  /// Statistics of log g_n over paths with g_n > 0.
  double mean_log = 0.0;
  double se_log = 0.0;
  std::size_t skipped_zeros = 0;
};

struct SimStats {
  std::size_t paths = 0;
  double lambda = 0.0;
  /// points[i] describes g_{i+1}.
  std::vector<SimPoint> points;

  const SimPoint& at(int n) const { return points.at(static_cast<std::size_t>(n - 1)); }
};

/// 2cos(pi/k) as a double, through the exact field (so k = 3 gives 1 exactly).
inline double lambda_value(int k) { return lambda_k(k).to_double(); }

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) addressed by (seed, path, step).
inline double counter_uniform(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ path) ^ step);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct Moments {
  double count = 0;
  double mean = 0;
  double m2 = 0;

  void push(double x) {
    count += 1;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / total;
    m2 += o.m2 + d * d * count * o.count / total;
    count = total;
  }
  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
};

struct BlockStats {
  std::vector<Moments> value;
  std::vector<Moments> log;
  std::vector<std::size_t> zeros;
};

inline constexpr std::size_t kSimBlock = 4096;

}  // namespace detail

inline SimStats sample_paths(const SimConfig& cfg) {
  if (cfg.path_count == 0) throw DomainError("simulate: path_count must be >= 1");
  if (cfg.path_length < 2) throw DomainError("simulate: path_length must be >= 2");
  if (!(cfg.p >= 0 && cfg.p <= 1)) throw DomainError("simulate: p must lie in [0, 1]");
  if (!(cfg.a >= 0 && cfg.b >= 0) || (cfg.a == 0 && cfg.b == 0)) {
    throw DomainError("simulate: initial values must be nonnegative and not both zero");
  }
  double lambda;
  if (cfg.k) {
    lambda = lambda_value(*cfg.k);
  } else if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else {
    throw DomainError("simulate: either k or lambda is required");
  }
  if (!(lambda > 0)) throw DomainError("simulate: lambda must be positive");

  const auto length = static_cast<std::size_t>(cfg.path_length);
  const std::size_t blocks = (cfg.path_count + detail::kSimBlock - 1) / detail::kSimBlock;
  std::vector<detail::BlockStats> partial(blocks);

  auto run_block = [&](std::size_t block) {
    detail::BlockStats s{std::vector<detail::Moments>(length), std::vector<detail::Moments>(length),
                         std::vector<std::size_t>(length, 0)};
    const std::size_t first = block * detail::kSimBlock;
    const std::size_t last = std::min(cfg.path_count, first + detail::kSimBlock);
    for (std::size_t path = first; path < last; ++path) {
      double prev = cfg.a, cur = cfg.b;
      auto record = [&](std::size_t i, double g) {
        s.value[i].push(g);
        if (g > 0) {
          s.log[i].push(std::log(g));
        } else {
          ++s.zeros[i];
        }
      };
      record(0, prev);
      record(1, cur);
      for (std::size_t i = 2; i < length; ++i) {
        const bool plus = detail::counter_uniform(cfg.rng_seed, path, i) < cfg.p;
        const double next = plus ? lambda * cur + prev : std::abs(lambda * cur - prev);
        prev = cur;
        cur = next;
        record(i, cur);
      }
    }
    partial[block] = std::move(s);
  };

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < blocks; ++i) run_block(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < blocks; i = next++) run_block(i);
      });
    }
  }

  // Merge in block order so the result is independent of scheduling.
  detail::BlockStats total{std::vector<detail::Moments>(length), std::vector<detail::Moments>(length),
                           std::vector<std::size_t>(length, 0)};
  for (const auto& s : partial) {
    for (std::size_t i = 0; i < length; ++i) {
      total.value[i].merge(s.value[i]);
      total.log[i].merge(s.log[i]);
      total.zeros[i] += s.zeros[i];
    }
  }
  SimStats out;
  out.paths = cfg.path_count;
  out.lambda = lambda;
  for (std::size_t i = 0; i < length; ++i) {
    SimPoint pt;
    pt.n = static_cast<int>(i + 1);
    pt.mean = total.value[i].mean;
    pt.variance = total.value[i].variance();
    pt.se = std::sqrt(pt.variance / total.value[i].count);
    pt.mean_log = total.log[i].mean;
    pt.se_log = total.log[i].count > 0 ? std::sqrt(total.log[i].variance() / total.log[i].count) : 0.0;
    pt.skipped_zeros = total.zeros[i];
    out.points.push_back(pt);
  }
  return out;
}

/// (1/n) log E[g_n] against E[(1/n) log g_n] at n = path_length.
struct JensenReport {
  int n = 0;
  double log_of_mean = 0.0;
  double mean_of_log = 0.0;
  double gap = 0.0;
  /// Jensen: log_of_mean >= mean_of_log.
  bool gap_nonnegative = true;
  std::size_t skipped_zeros = 0;
};

inline JensenReport jensen_report(const SimStats& stats) {
  const SimPoint& last = stats.points.back();
  JensenReport r;
  r.n = last.n;
  r.log_of_mean = std::log(last.mean) / last.n;
  r.mean_of_log = last.mean_log / last.n;
  r.gap = r.log_of_mean - r.mean_of_log;
  // Tolerate rounding when every path is the same (p = 0 or 1).
  r.gap_nonnegative = r.gap >= -1e-12 * std::max(1.0, std::abs(r.log_of_mean));
  r.skipped_zeros = last.skipped_zeros;
  return r;
}

inline JensenReport jensen_report(const SimConfig& cfg) { return jensen_report(sample_paths(cfg)); }

}  // namespace rfib
