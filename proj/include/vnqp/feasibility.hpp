#ifndef VNQP_FEASIBILITY_HPP
#define VNQP_FEASIBILITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vnqp/cone.hpp"
#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"
#include "vnqp/min_norm.hpp"
#include "vnqp/qr_update.hpp"

namespace vnqp {

enum class Algo { Enhanced, VonNeumann, Perceptron };
enum class Aggregation { Oldest, SmallestCoeff, LargestCoeff, OldestIntoAccumulator, None };
enum class SolveStatus { DualCertificate, PrimalEpsSolution, InteriorCertificate, IterLimit };

class TooFewPoints : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline const char* to_string(Algo a) {
  switch (a) {
    case Algo::Enhanced: return "enhanced";
    case Algo::VonNeumann: return "vn";
    case Algo::Perceptron: return "perceptron";
  }
  return "?";
}

inline const char* to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Oldest: return "oldest";
    case Aggregation::SmallestCoeff: return "smallest";
    case Aggregation::LargestCoeff: return "largest";
    case Aggregation::OldestIntoAccumulator: return "accumulator";
    case Aggregation::None: return "none";
  }
  return "?";
}

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::DualCertificate: return "dual_certificate";
    case SolveStatus::PrimalEpsSolution: return "primal_eps";
    case SolveStatus::InteriorCertificate: return "interior_certificate";
    case SolveStatus::IterLimit: return "iter_limit";
  }
  return "?";
}

inline std::optional<Aggregation> parse_aggregation(const std::string& s) {
  for (auto a : {Aggregation::Oldest, Aggregation::SmallestCoeff, Aggregation::LargestCoeff,
                 Aggregation::OldestIntoAccumulator, Aggregation::None}) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

inline constexpr std::size_t kUnboundedSet = 0;

struct SolveConfig {
  Algo algo = Algo::Enhanced;
  std::size_t max_set = kUnboundedSet;  // N; 0 means unbounded
  Aggregation aggregation = Aggregation::OldestIntoAccumulator;
  double eps = 1e-9;
  double cert_margin = 0.0;
  std::size_t max_iters = 2000;
  QpConfig qp;
  std::optional<Vector> x0;
  bool record_trace = true;
};

struct IterTrace {
  std::size_t iter = 0;
  double norm_y = 0.0;
  double q1 = 0.0;
  std::size_t active_size = 0;
  bool agg_event = false;
  std::size_t inner_qp_iters = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterLimit;
  std::size_t iterations = 0;
  Vector y;
  Vector x;
  std::vector<Vector> support;
  Vector support_weights;
  std::vector<IterTrace> trace;
};

/// Sparse n-vector with sorted indices: the pre-image of a hull point.
struct SparseVec {
  std::vector<std::size_t> idx;
  std::vector<double> val;

  static SparseVec unit(std::size_t j, double v) { return {{j}, {v}}; }

  /// wa * a + wb * b
  static SparseVec combine(const SparseVec& a, double wa, const SparseVec& b, double wb) {
    SparseVec out;
    std::size_t i = 0, k = 0;
    while (i < a.idx.size() || k < b.idx.size()) {
      if (k == b.idx.size() || (i < a.idx.size() && a.idx[i] < b.idx[k])) {
        out.idx.push_back(a.idx[i]);
        out.val.push_back(wa * a.val[i++]);
      } else if (i == a.idx.size() || b.idx[k] < a.idx[i]) {
        out.idx.push_back(b.idx[k]);
        out.val.push_back(wb * b.val[k++]);
      } else {
        out.idx.push_back(a.idx[i]);
        out.val.push_back(wa * a.val[i++] + wb * b.val[k++]);
      }
    }
    return out;
  }

  void add_to(Vector& dense, double w) const {
    for (std::size_t t = 0; t < idx.size(); ++t) dense[idx[t]] += w * val[t];
  }
};

/// Snapshot handed to observers once per iteration, after line 12.
struct IterationView {
  std::size_t iter;
  const Vector& y;
  const Vector& x;
  const std::vector<Vector>& points;
  const Vector& lambda;
};

using SolveObserver = std::function<void(const IterationView&)>;

/// Hull point bookkeeping kept in step with the QP state.
struct HullPoint {
  SparseVec coeff;
  std::size_t birth = 0;
  bool aggregated = false;
  bool accumulator = false;
};

struct AggregateResult {
  std::vector<Vector> points;
  std::vector<HullPoint> meta;
  Vector lambda;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> two_oldest(const std::vector<HullPoint>& meta, bool fresh_only) {
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < meta.size(); ++j)
    if (!fresh_only || (!meta[j].aggregated && !meta[j].accumulator)) order.push_back(j);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::tie(meta[a].birth, a) < std::tie(meta[b].birth, b); });
  if (order.size() < 2) return {kUnlimited, kUnlimited};
  return {order[0], order[1]};
}

inline std::size_t oldest_fresh(const std::vector<HullPoint>& meta, std::size_t skip) {
  std::size_t best = kUnlimited;
  for (std::size_t j = 0; j < meta.size(); ++j) {
    if (j == skip || meta[j].aggregated || meta[j].accumulator) continue;
    if (best == kUnlimited || meta[j].birth < meta[best].birth) best = j;
  }
  if (best != kUnlimited) return best;
  for (std::size_t j = 0; j < meta.size(); ++j) {
    if (j == skip) continue;
    if (best == kUnlimited || meta[j].birth < meta[best].birth) best = j;
  }
  return best;
}

}  // namespace detail

/// One aggregation step: merges two points into their weighted average so
/// that sum lambda_j c_j is unchanged. All weights must be positive.
inline AggregateResult aggregate(std::vector<Vector> points, std::vector<HullPoint> meta, Vector lambda,
                                 Aggregation rule) {
  const std::size_t k = points.size();
  require_same_size(k, meta.size(), "aggregate meta");
  require_same_size(k, lambda.size(), "aggregate lambda");
  if (k < 2) throw TooFewPoints("aggregate: need at least two points");
  for (double l : lambda)
    if (!(l > 0.0)) throw InvalidArgument("aggregate: weights must be positive");

  if (rule == Aggregation::None) {
    Vector y(points.front().size(), 0.0);
    SparseVec x;
    for (std::size_t j = 0; j < k; ++j) {
      axpy<double>(lambda[j], points[j], y);
      x = SparseVec::combine(x, 1.0, meta[j].coeff, lambda[j]);
    }
    HullPoint h{std::move(x), meta.back().birth, true, false};
    return {{std::move(y)}, {std::move(h)}, {1.0}};
  }

  std::size_t a = kUnlimited, b = kUnlimited;
  switch (rule) {
    case Aggregation::Oldest: {
      std::tie(a, b) = detail::two_oldest(meta, true);
      if (a == kUnlimited) std::tie(a, b) = detail::two_oldest(meta, false);
      break;
    }
    case Aggregation::SmallestCoeff:
    case Aggregation::LargestCoeff: {
      std::vector<std::size_t> order(k);
      for (std::size_t j = 0; j < k; ++j) order[j] = j;
      const bool smallest = rule == Aggregation::SmallestCoeff;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
        return smallest ? lambda[p] < lambda[q] : lambda[p] > lambda[q];
      });
      a = order[0];
      b = order[1];
      break;
    }
    case Aggregation::OldestIntoAccumulator: {
      std::size_t acc = kUnlimited;
      for (std::size_t j = 0; j < k; ++j)
        if (meta[j].accumulator) acc = j;
      if (acc == kUnlimited) {
        std::tie(a, b) = detail::two_oldest(meta, true);
        if (a == kUnlimited) std::tie(a, b) = detail::two_oldest(meta, false);
      } else {
        a = acc;
        b = detail::oldest_fresh(meta, acc);
      }
      break;
    }
    case Aggregation::None: break;
  }
  if (a > b) std::swap(a, b);
  const double wa = lambda[a], wb = lambda[b], w = wa + wb;
  Vector merged(points[a].size());
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i] = (wa * points[a][i] + wb * points[b][i]) / w;
  HullPoint h{SparseVec::combine(meta[a].coeff, wa / w, meta[b].coeff, wb / w),
              std::min(meta[a].birth, meta[b].birth), true,
              rule == Aggregation::OldestIntoAccumulator};

  AggregateResult out;
  if (rule == Aggregation::OldestIntoAccumulator) {
    // the accumulator lives in the first slot
    out.points.push_back(std::move(merged));
    out.meta.push_back(std::move(h));
    out.lambda.push_back(w);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == a || j == b) continue;
      out.points.push_back(std::move(points[j]));
      out.meta.push_back(std::move(meta[j]));
      out.lambda.push_back(lambda[j]);
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == b) continue;
      if (j == a) {
        out.points.push_back(std::move(merged));
        out.meta.push_back(std::move(h));
        out.lambda.push_back(w);
      } else {
        out.points.push_back(std::move(points[j]));
        out.meta.push_back(std::move(meta[j]));
        out.lambda.push_back(lambda[j]);
      }
    }
  }
  return out;
}

/// m+1 positive weights whose points affinely span R^m, with the weighted
/// sum within eps of the origin.
inline bool interior_certificate(const std::vector<Vector>& points, const Vector& lambda, std::size_t m,
                                 double eps = 1e-9, double rank_tol = 1e-10) {
  require_same_size(points.size(), lambda.size(), "interior_certificate");
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < lambda.size(); ++j)
    if (lambda[j] > 0.0) support.push_back(j);
  if (support.size() != m + 1) return false;
  QrUpdater<double> qr(m, rank_tol);
  for (std::size_t t = 1; t < support.size(); ++t) {
    if (qr.insert_column(subtract(points[support[t]], points[support[0]])) != InsertStatus::Inserted) return false;
  }
  Vector y(m, 0.0);
  for (std::size_t j : support) axpy<double>(lambda[j], points[j], y);
  return norm(y) <= eps;
}

namespace detail {

inline void check_config(const ConeProblem& problem, const SolveConfig& config) {
  if (config.max_set == 1) throw InvalidArgument("SolveConfig: max_set must be 0 (unbounded) or at least 2");
  if (!(config.eps > 0.0)) throw InvalidArgument("SolveConfig: eps must be positive");
  if (config.cert_margin < 0.0) throw InvalidArgument("SolveConfig: cert_margin must be nonnegative");
  if (problem.n() == 0 || problem.m() == 0) throw InvalidArgument("ConeProblem: empty matrix");
}

inline SparseVec start_point(const ConeProblem& problem, const SolveConfig& config) {
  const std::size_t n = problem.n();
  SparseVec x;
  if (config.x0) {
    require_same_size(n, config.x0->size(), "SolveConfig x0");
    double ux = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (*config.x0)[j];
      if (v < 0.0) throw InvalidArgument("SolveConfig x0: must lie in K");
      ux += problem.cone.u_bar()[j] * v;
      if (v != 0.0) {
        x.idx.push_back(j);
        x.val.push_back(v);
      }
    }
    if (std::abs(ux - 1.0) > 1e-10) throw InvalidArgument("SolveConfig x0: u_bar^T x0 must be 1");
    return x;
  }
  double total = 0;
  for (double u : problem.cone.u_bar()) total += u;
  x.idx.resize(n);
  x.val.assign(n, 1.0 / total);
  for (std::size_t j = 0; j < n; ++j) x.idx[j] = j;
  return x;
}

inline Vector apply(const ConeProblem& problem, const SparseVec& x) {
  Vector y(problem.m(), 0.0);
  for (std::size_t t = 0; t < x.idx.size(); ++t) axpy<double>(x.val[t], problem.a.col(x.idx[t]), y);
  return y;
}

inline Vector densify(const SparseVec& x, std::size_t n) {
  Vector d(n, 0.0);
  x.add_to(d, 1.0);
  return d;
}

}  // namespace detail

/// Enhanced von Neumann: hull of the generated points projected with the
/// active-set QP, capped at max_set - 1 points by aggregation.
inline SolveOutcome solve_enhanced(const ConeProblem& problem, const SolveConfig& config,
                                   const SolveObserver& observer = {}) {
  detail::check_config(problem, config);
  const std::size_t m = problem.m(), n = problem.n();
  SolveOutcome out;

  MinNormState<double> qp(m, config.qp);
  std::vector<HullPoint> meta;
  std::size_t births = 0;
  {
    SparseVec x0 = detail::start_point(problem, config);
    qp.add_point(detail::apply(problem, x0));
    meta.push_back({std::move(x0), births++, false, false});
  }

  bool agg_event = false;
  std::size_t inner_iters = 0;
  const auto current_x = [&]() {
    SparseVec x;
    for (std::size_t j = 0; j < qp.size(); ++j)
      if (qp.lambda()[j] > 0.0) x = SparseVec::combine(x, 1.0, meta[j].coeff, qp.lambda()[j]);
    return x;
  };

  for (std::size_t i = 0;; ++i) {
    const Vector& y = qp.y();
    const Vector aty = problem.a.multiply_transpose(y);
    const double ny = norm(y);
    if (config.record_trace) out.trace.push_back({i, ny, q1_from_aty(aty), qp.size(), agg_event, inner_iters});
    out.iterations = i;
    if (observer) {
      const Vector x = detail::densify(current_x(), n);
      observer({i, y, x, qp.points(), qp.lambda()});
    }

    if (i > 0 && ny <= config.eps) {
      if (interior_certificate(qp.points(), qp.lambda(), m, config.eps, config.qp.rank_tol)) {
        out.status = SolveStatus::InteriorCertificate;
        for (std::size_t j = 0; j < qp.size(); ++j) {
          if (qp.lambda()[j] > 0.0) {
            out.support.push_back(qp.point(j));
            out.support_weights.push_back(qp.lambda()[j]);
          }
        }
      } else {
        out.status = SolveStatus::PrimalEpsSolution;
      }
      const SparseVec x = current_x();
      if (out.status == SolveStatus::InteriorCertificate || norm(detail::apply(problem, x)) <= config.eps) {
        out.x = detail::densify(x, n);
        out.y = y;
        return out;
      }
    }
    const LmoResult lmo = cone_lmo_from_aty(problem.cone, aty);
    if (lmo.value > config.cert_margin) {
      out.status = SolveStatus::DualCertificate;
      out.y = y;
      return out;
    }
    if (i == config.max_iters) {
      out.status = SolveStatus::IterLimit;
      out.y = y;
      out.x = detail::densify(current_x(), n);
      return out;
    }

    // distance reduction
    Vector ap(problem.a.col(lmo.index).begin(), problem.a.col(lmo.index).end());
    for (auto& v : ap) v *= lmo.scale;
    qp.add_point(std::move(ap));
    meta.push_back({SparseVec::unit(lmo.index, lmo.scale), births++, false, false});
    const std::size_t inner_before = qp.inner_count();
    qp.solve();
    inner_iters = qp.inner_count() - inner_before;

    // aggregation: drop unsupported points, then merge down to max_set - 1
    std::vector<bool> keep(qp.size());
    std::vector<HullPoint> kept_meta;
    for (std::size_t j = 0; j < qp.size(); ++j) {
      keep[j] = qp.lambda()[j] > 0.0;
      if (keep[j]) kept_meta.push_back(std::move(meta[j]));
    }
    qp.compact(keep);
    meta = std::move(kept_meta);
    agg_event = false;
    if (config.max_set != kUnboundedSet && qp.size() > config.max_set - 1) {
      AggregateResult agg{qp.points(), std::move(meta), qp.lambda()};
      while (agg.points.size() > config.max_set - 1) {
        agg = aggregate(std::move(agg.points), std::move(agg.meta), std::move(agg.lambda), config.aggregation);
      }
      meta = std::move(agg.meta);
      qp.assign(std::move(agg.points), std::move(agg.lambda));
      agg_event = true;
    }
  }
}

/// Classic von Neumann: C = {y_i, A p_{i+1}} with the closed-form segment
/// projection.
inline SolveOutcome solve_von_neumann(const ConeProblem& problem, const SolveConfig& config,
                                      const SolveObserver& observer = {}) {
  detail::check_config(problem, config);
  const std::size_t m = problem.m(), n = problem.n();
  SolveOutcome out;
  Vector x = detail::densify(detail::start_point(problem, config), n);
  Vector y = problem.a.multiply(x);
  const std::vector<Vector> no_points;
  const Vector no_lambda;
  for (std::size_t i = 0;; ++i) {
    const Vector aty = problem.a.multiply_transpose(y);
    const double ny = norm(y);
    if (config.record_trace) out.trace.push_back({i, ny, q1_from_aty(aty), i == 0 ? 1u : 2u, false, i > 0 ? 1u : 0u});
    out.iterations = i;
    if (observer) observer({i, y, x, no_points, no_lambda});
    if (i > 0 && ny <= config.eps && norm(problem.a.multiply(x)) <= config.eps) {
      out.status = SolveStatus::PrimalEpsSolution;
      out.x = x;
      out.y = y;
      return out;
    }
    const LmoResult lmo = cone_lmo_from_aty(problem.cone, aty);
    if (lmo.value > config.cert_margin) {
      out.status = SolveStatus::DualCertificate;
      out.y = y;
      return out;
    }
    if (i == config.max_iters) {
      out.status = SolveStatus::IterLimit;
      out.x = x;
      out.y = y;
      return out;
    }
    // t = y^T (y - a) / ||y - a||^2 clamped to [0, 1]
    Vector d(m);
    const auto col = problem.a.col(lmo.index);
    for (std::size_t r = 0; r < m; ++r) d[r] = lmo.scale * col[r] - y[r];
    const double dd = dot(d, d);
    if (dd == 0.0) continue;
    const double t = std::clamp(-dot(y, d) / dd, 0.0, 1.0);
    for (std::size_t r = 0; r < m; ++r) y[r] += t * d[r];
    for (auto& v : x) v *= 1.0 - t;
    x[lmo.index] += t * lmo.scale;
  }
}

/// Normalized perceptron: y_0 = 0, y += a_j / ||a_j|| for the first column
/// with a_j^T y <= 0.
inline SolveOutcome solve_perceptron(const ConeProblem& problem, const SolveConfig& config) {
  detail::check_config(problem, config);
  SolveOutcome out;
  Vector y(problem.m(), 0.0);
  for (std::size_t i = 0;; ++i) {
    const Vector aty = problem.a.multiply_transpose(y);
    if (config.record_trace) out.trace.push_back({i, norm(y), q1_from_aty(aty), 0, false, 0});
    out.iterations = i;
    std::size_t violated = kUnlimited;
    for (std::size_t j = 0; j < aty.size(); ++j) {
      if (!(aty[j] / problem.cone.u_bar()[j] > config.cert_margin)) {
        violated = j;
        break;
      }
    }
    if (violated == kUnlimited) {
      out.status = SolveStatus::DualCertificate;
      out.y = y;
      return out;
    }
    const double len = norm(problem.a.col(violated));
    if (i == config.max_iters || len == 0.0) {
      out.status = SolveStatus::IterLimit;
      out.y = y;
      return out;
    }
    axpy<double>(1.0 / len, problem.a.col(violated), y);
  }
}

inline SolveOutcome solve(const ConeProblem& problem, const SolveConfig& config, const SolveObserver& observer = {}) {
  switch (config.algo) {
    case Algo::Enhanced: return solve_enhanced(problem, config, observer);
    case Algo::VonNeumann: return solve_von_neumann(problem, config, observer);
    case Algo::Perceptron: return solve_perceptron(problem, config);
  }
  throw InvalidArgument("solve: unknown algorithm");
}

inline void write_trace_csv(std::ostream& os, const std::vector<IterTrace>& trace) {
  os << "iter,norm_y,q1,active_size,agg_event,inner_qp_iters\n";
  for (const auto& t : trace) {
    os << t.iter << ',' << std::setprecision(17) << t.norm_y << ',' << t.q1 << ',' << t.active_size << ','
       << (t.agg_event ? 1 : 0) << ',' << t.inner_qp_iters << '\n';
  }
}

}  // namespace vnqp

#endif  // VNQP_FEASIBILITY_HPP
