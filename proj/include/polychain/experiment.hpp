#ifndef POLYCHAIN_EXPERIMENT_HPP
#define POLYCHAIN_EXPERIMENT_HPP

// Batch Monte Carlo runs of the chain solvers and their summary statistics.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polychain/chain.hpp"
#include "polychain/geometry.hpp"
#include "polychain/sampling.hpp"

namespace polychain {

enum class SampleModel { uniform, poisson };

/// How the solver restricts the sample: whole triangle, a fixed band around
/// the arc, or a band widened from n^(-1/3) until the length is stable.
struct WidthPolicy {
  enum class Kind { exact, fixed, automatic };
  Kind kind = Kind::exact;
  double value = 0.0;

  static WidthPolicy exact() { return {}; }
  static WidthPolicy fixed(double w) { return {Kind::fixed, w}; }
  static WidthPolicy automatic() { return {Kind::automatic, 0.0}; }
};

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t samples = 1;
  SampleModel model = SampleModel::uniform;
  WidthPolicy width;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  // Wall-clock fields are zero unless enabled, so output stays reproducible.
  bool timing = false;

  void validate() const {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (width.kind == WidthPolicy::Kind::fixed && !(width.value > 0.0)) {
      throw std::invalid_argument("width must be > 0");
    }
  }
};

struct RunRecord {
  std::size_t sample_index = 0;
  std::uint64_t seed = 0;
  std::size_t realized_n = 0;
  std::size_t L = 0;
  double dist_to_gamma = 0.0;
  double width_used = 0.0;
  std::size_t active_points = 0;
  bool failed = false;
  std::string error;
  double wall_time = 0.0;
};

struct StatsSummary {
  std::size_t count = 0;
  std::size_t failures = 0;
  double mean_L = 0.0;
  double median_L = 0.0;
  double stddev_L = 0.0;
  std::size_t d_n = 0;
  double normalized_mean = 0.0;
  std::size_t min_L = 0;
  std::size_t max_L = 0;
  double median_dist = 0.0;
  double max_width = 0.0;
};

/// Start of the automatic widening.
inline double auto_start_width(std::size_t n) {
  return std::min(kTriangleDiameter, 1.0 / std::cbrt(static_cast<double>(std::max<std::size_t>(n, 1))));
}

inline PointSample draw_sample(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.model == SampleModel::uniform) return sample_uniform(cfg.n, seed);
  // Intensity n / A(T) gives n points on average.
  return sample_poisson(static_cast<double>(cfg.n) / Triangle::standard().area(), seed);
}

inline RunRecord run_one(const ExperimentConfig& cfg, std::size_t index) {
  RunRecord rec;
  rec.sample_index = index;
  rec.seed = mix_seed(cfg.master_seed, index);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const PointSample sample = draw_sample(cfg, rec.seed);
    rec.realized_n = sample.points.size();
    ConvexChain chain;
    switch (cfg.width.kind) {
      case WidthPolicy::Kind::exact:
        chain = longest_chain_exact(sample);
        rec.width_used = kTriangleDiameter;
        rec.active_points = rec.realized_n;
        break;
      case WidthPolicy::Kind::fixed:
      case WidthPolicy::Kind::automatic: {
        const bool autow = cfg.width.kind == WidthPolicy::Kind::automatic;
        const PrunedResult pr =
            longest_chain_pruned(sample, autow ? auto_start_width(cfg.n) : cfg.width.value, autow);
        chain = pr.chain;
        rec.width_used = pr.width;
        rec.active_points = pr.active_points;
        break;
      }
    }
    rec.L = chain.length();
    rec.dist_to_gamma = hausdorff_to_gamma(chain_path(sample, chain));
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  if (cfg.timing) rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// One record per sample, ordered by sample index.  Each sample depends only
/// on its own seed, so the result does not depend on the worker count.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunRecord> out(cfg.samples);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.samples; i = next++) out[i] = run_one(cfg, i);
  };
  const std::size_t threads = std::min(cfg.workers, cfg.samples);
  if (threads <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  pool.clear();
  return out;
}

/// Statistics over the successful records; `n` is the nominal sample size
/// used for normalization.
inline StatsSummary summarize(std::span<const RunRecord> records, std::size_t n) {
  std::vector<double> ls;
  std::vector<double> dists;
  StatsSummary s;
  for (const RunRecord& r : records) {
    if (r.failed) {
      ++s.failures;
      continue;
    }
    ls.push_back(static_cast<double>(r.L));
    dists.push_back(r.dist_to_gamma);
    s.max_width = std::max(s.max_width, r.width_used);
  }
  if (ls.empty()) throw std::invalid_argument("no successful records to summarize");
  s.count = ls.size();
  s.mean_L = std::accumulate(ls.begin(), ls.end(), 0.0) / static_cast<double>(s.count);
  double ss = 0.0;
  double dev = 0.0;
  for (double l : ls) {
    ss += (l - s.mean_L) * (l - s.mean_L);
    dev = std::max(dev, std::abs(l - s.mean_L));
  }
  s.stddev_L = std::sqrt(ss / static_cast<double>(s.count));
  s.d_n = static_cast<std::size_t>(std::floor(dev));
  std::sort(ls.begin(), ls.end());
  std::sort(dists.begin(), dists.end());
  const std::size_t mid = (s.count - 1) / 2;  // lower median
  s.median_L = ls[mid];
  s.median_dist = dists[mid];
  s.min_L = static_cast<std::size_t>(ls.front());
  s.max_L = static_cast<std::size_t>(ls.back());
  s.normalized_mean = n > 0 ? s.mean_L / std::cbrt(static_cast<double>(n)) : 0.0;
  return s;
}

struct ProbabilityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

/// 2^k / (k! (k+1)!), the probability that k uniform points form a convex chain.
inline double convex_position_exact(unsigned k) {
  double p = 1.0;
  for (unsigned i = 1; i <= k; ++i) p *= 2.0 / static_cast<double>(i) / static_cast<double>(i + 1);
  return p;
}

inline ProbabilityEstimate convex_position_probability(unsigned k, std::uint64_t trials, std::uint64_t seed) {
  if (k < 1 || trials < 1) throw std::invalid_argument("need k >= 1 and trials >= 1");
  Rng rng(seed);
  std::vector<Point> pts(k);
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  ProbabilityEstimate est;
  est.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (Point& p : pts) p = uniform_point(rng);
    if (is_convex_chain(pts, idx)) ++est.successes;
  }
  const double p = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.estimate = p;
  est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return est;
}

struct LowerBoundEstimate {
  std::size_t triangles = 0;
  double mean_nonempty = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // (cbrt(n/2) - 1)(1 - e^-2)
  bool satisfied = false;
};

namespace detail {

inline bool in_closed_triangle(Point q, const TangentTriangle& t) {
  const double a = orient(t.from, t.apex, q);
  const double b = orient(t.apex, t.to, q);
  const double c = orient(t.to, t.from, q);
  return (a >= 0 && b >= 0 && c >= 0) || (a <= 0 && b <= 0 && c <= 0);
}

}  // namespace detail

/// Tangent triangles of area 2A(T)/n along the arc; counts how many receive
/// at least one of n uniform points.  A point in each nonempty triangle gives
/// a convex chain, so the count is a lower bound for the longest chain.
inline LowerBoundEstimate lower_bound_construction(std::size_t n, std::uint64_t trials, std::uint64_t seed) {
  if (n < 2 || trials < 1) throw std::invalid_argument("need n >= 2 and trials >= 1");
  const double area = Triangle::standard().area();
  const std::vector<TangentTriangle> tris = equal_area_subdivision(2.0 * area / static_cast<double>(n));
  LowerBoundEstimate est;
  est.triangles = tris.size();
  est.bound = (std::cbrt(static_cast<double>(n) / 2.0) - 1.0) * (1.0 - std::exp(-2.0));
  double sum = 0.0;
  double sum2 = 0.0;
  std::vector<char> hit(tris.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    const PointSample s = sample_uniform(n, mix_seed(seed, t));
    std::fill(hit.begin(), hit.end(), 0);
    for (const Point& q : s.points) {
      for (std::size_t i = 0; i < tris.size(); ++i) {
        if (!hit[i] && detail::in_closed_triangle(q, tris[i])) hit[i] = 1;
      }
    }
    const double c = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
    sum += c;
    sum2 += c * c;
  }
  const double m = static_cast<double>(trials);
  est.mean_nonempty = sum / m;
  const double var = trials > 1 ? std::max(0.0, (sum2 - m * est.mean_nonempty * est.mean_nonempty) / (m - 1.0)) : 0.0;
  est.std_error = std::sqrt(var / m);
  est.satisfied = est.mean_nonempty >= est.bound - 3.0 * est.std_error;
  return est;
}

struct TableRow {
  std::size_t n = 0;
  std::size_t samples = 0;
  WidthPolicy width;
};

struct TableResult {
  TableRow row;
  std::uint64_t master_seed = 0;
  bool failed = false;
  std::string error;
  StatsSummary stats;
  double wall_secs = 0.0;
};

/// One summarized batch per row; row r uses master seed mix(master, r).
inline std::vector<TableResult> reproduce_table(std::span<const TableRow> rows, std::uint64_t master_seed,
                                                std::size_t workers, bool timing = false) {
  std::vector<TableResult> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    TableResult res;
    res.row = rows[r];
    res.master_seed = mix_seed(master_seed, r);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ExperimentConfig cfg;
      cfg.n = rows[r].n;
      cfg.samples = rows[r].samples;
      cfg.width = rows[r].width;
      cfg.master_seed = res.master_seed;
      cfg.workers = workers;
      const std::vector<RunRecord> recs = run_experiment(cfg);
      res.stats = summarize(recs, cfg.n);
    } catch (const std::exception& e) {
      res.failed = true;
      res.error = e.what();
    }
    if (timing) res.wall_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(res);
  }
  return out;
}

}  // namespace polychain

#endif  // POLYCHAIN_EXPERIMENT_HPP
