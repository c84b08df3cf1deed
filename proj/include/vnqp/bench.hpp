#ifndef VNQP_BENCH_HPP
#define VNQP_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vnqp/cone.hpp"
#include "vnqp/error.hpp"
#include "vnqp/feasibility.hpp"
#include "vnqp/instance.hpp"

namespace vnqp {

/// One solver configuration in a benchmark. Spelled "vn", "perceptron",
/// "N" or "N:rule" where N is the memory cap (0 = unbounded) and rule one
/// of oldest, smallest, largest, accumulator, none.
struct Variant {
  std::string label;
  Algo algo = Algo::Enhanced;
  std::size_t max_set = kUnboundedSet;
  Aggregation aggregation = Aggregation::OldestIntoAccumulator;
};

inline Variant parse_variant(const std::string& text) {
  if (text == "vn") return {text, Algo::VonNeumann, 2, Aggregation::None};
  if (text == "perceptron") return {text, Algo::Perceptron, 0, Aggregation::None};
  const auto colon = text.find(':');
  const std::string num = text.substr(0, colon);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 9)
    throw InvalidArgument("variant '" + text + "': expected vn, perceptron, N or N:rule");
  Variant v{text, Algo::Enhanced, static_cast<std::size_t>(std::stoul(num)), Aggregation::OldestIntoAccumulator};
  if (v.max_set == 1) throw InvalidArgument("variant '" + text + "': memory cap must be 0 or at least 2");
  if (colon != std::string::npos) {
    const auto rule = parse_aggregation(text.substr(colon + 1));
    if (!rule) throw InvalidArgument("variant '" + text + "': unknown aggregation rule");
    v.aggregation = *rule;
  }
  return v;
}

inline std::vector<Variant> parse_variants(const std::string& list) {
  std::vector<Variant> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_variant(item));
  if (out.empty()) throw InvalidArgument("no variants given");
  return out;
}

struct BenchConfig {
  std::size_t m = 30;
  std::size_t n = 8000;
  double shift = 0.315;
  std::vector<std::uint64_t> seeds;
  std::vector<Variant> variants;
  std::size_t max_iters = 2000;
  double eps = 1e-9;
  std::size_t threads = 0;  // 0: VNQP_THREADS, else hardware concurrency
};

/// Consecutive seeds first, first + 1, ..., first + count - 1.
inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

/// Checkpoint norms are taken at iteration 80 and 400, or at the last
/// iteration when the run stopped earlier.
struct BenchRow {
  std::uint64_t seed = 0;
  Variant variant;
  SolveStatus status = SolveStatus::IterLimit;
  std::size_t iterations = 0;
  double final_norm_y = 0.0;
  double norm_y_at_80 = 0.0;
  double norm_y_at_400 = 0.0;

  bool decided() const { return status != SolveStatus::IterLimit; }
};

struct BenchReport {
  std::vector<BenchRow> rows;  // seed-major, variants in config order
  std::size_t variant_count = 0;
};

inline std::size_t resolve_threads(std::size_t requested) {
  if (const char* env = std::getenv("VNQP_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void check_bench_config(const BenchConfig& c) {
  if (c.m < 2 || c.n < 1) throw InvalidArgument("bench: need m >= 2 and n >= 1");
  if (!(c.shift > 0.0 && c.shift < 1.0)) throw InvalidArgument("bench: shift must lie in (0,1)");
  if (c.variants.empty()) throw InvalidArgument("bench: no variants");
}

inline BenchRow run_variant(const ConeProblem& problem, std::uint64_t seed, const Variant& v, const BenchConfig& c) {
  SolveConfig cfg;
  cfg.algo = v.algo;
  cfg.max_set = v.max_set;
  cfg.aggregation = v.aggregation;
  cfg.eps = c.eps;
  cfg.max_iters = c.max_iters;
  cfg.record_trace = true;
  const auto out = solve(problem, cfg);
  BenchRow row{seed, v, out.status, out.iterations, norm(out.y), 0.0, 0.0};
  auto at = [&](std::size_t i) {
    return out.trace.empty() ? row.final_norm_y : out.trace[std::min(i, out.trace.size() - 1)].norm_y;
  };
  row.norm_y_at_80 = at(80);
  row.norm_y_at_400 = at(400);
  return row;
}

/// Runs every (seed, variant) pair. Seeds are handed to worker threads; each
/// worker builds its own instance, so the report does not depend on the
/// thread count.
inline BenchReport run_benchmark(const BenchConfig& config) {
  check_bench_config(config);
  const std::size_t ns = config.seeds.size();
  const std::size_t nv = config.variants.size();
  BenchReport report;
  report.variant_count = nv;
  report.rows.resize(ns * nv);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t s = next++; s < ns; s = next++) {
      try {
        const ConeProblem problem(generate_instance(config.m, config.n, config.shift, config.seeds[s]));
        for (std::size_t v = 0; v < nv; ++v)
          report.rows[s * nv + v] = run_variant(problem, config.seeds[s], config.variants[v], config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(resolve_threads(config.threads), std::max<std::size_t>(ns, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_report_csv(std::ostream& os, const BenchReport& report) {
  os << "seed,variant,algo,max_set,aggregation,status,iterations,final_norm_y,norm_y_at_80,norm_y_at_400\n";
  for (const auto& r : report.rows) {
    os << r.seed << ',' << r.variant.label << ',' << to_string(r.variant.algo) << ',' << r.variant.max_set << ','
       << to_string(r.variant.aggregation) << ',' << to_string(r.status) << ',' << r.iterations << ','
       << format_double(r.final_norm_y) << ',' << format_double(r.norm_y_at_80) << ','
       << format_double(r.norm_y_at_400) << '\n';
  }
}

/// Per-variant comparison against a baseline variant, counting each seed in
/// exactly one column. A run that did not decide counts as more iterations
/// than any run that did.
struct VersusBaseline {
  std::string label;
  std::size_t baseline_more = 0;   // baseline needed more iterations
  std::size_t baseline_fewer = 0;  // baseline needed fewer
  std::size_t equal = 0;           // both decided in the same count
  std::size_t both_undecided = 0;
  std::size_t decided = 0;
  std::size_t undecided = 0;
};

inline std::vector<VersusBaseline> summarize(const BenchReport& report, const std::string& baseline_label = "2") {
  const std::size_t nv = report.variant_count;
  if (nv == 0) return {};
  std::size_t base = nv;
  for (std::size_t v = 0; v < nv && !report.rows.empty(); ++v)
    if (report.rows[v].variant.label == baseline_label) base = v;
  std::vector<VersusBaseline> out(nv);
  for (std::size_t v = 0; v < nv && !report.rows.empty(); ++v) out[v].label = report.rows[v].variant.label;
  const auto count = [](const BenchRow& r) {
    return r.decided() ? r.iterations : std::numeric_limits<std::size_t>::max();
  };
  for (std::size_t s = 0; s * nv < report.rows.size(); ++s) {
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& r = report.rows[s * nv + v];
      auto& sum = out[v];
      (r.decided() ? sum.decided : sum.undecided)++;
      if (base == nv) continue;
      const auto& b = report.rows[s * nv + base];
      if (!r.decided() && !b.decided())
        ++sum.both_undecided;
      else if (count(b) > count(r))
        ++sum.baseline_more;
      else if (count(b) < count(r))
        ++sum.baseline_fewer;
      else
        ++sum.equal;
    }
  }
  return out;
}

inline void write_summary_csv(std::ostream& os, const std::vector<VersusBaseline>& rows) {
  os << "variant,baseline_more,baseline_fewer,equal,both_undecided,decided,undecided\n";
  for (const auto& r : rows)
    os << r.label << ',' << r.baseline_more << ',' << r.baseline_fewer << ',' << r.equal << ',' << r.both_undecided
       << ',' << r.decided << ',' << r.undecided << '\n';
}

}  // namespace vnqp

#endif  // VNQP_BENCH_HPP
