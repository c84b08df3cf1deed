#ifndef VNQP_MIN_NORM_HPP
#define VNQP_MIN_NORM_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"
#include "vnqp/qr_update.hpp"

namespace vnqp {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct QpConfig {
  double enter_tol = 1e-12;  // relative to ||y||^2
  std::size_t max_outer = kUnlimited;
  std::size_t max_inner = kUnlimited;
  double rank_tol = 1e-10;
};

enum class StepStatus { Progress, AlreadyOptimal };
enum class QpStatus { Optimal, InnerBudgetExhausted };

/// Result of the affine projection: y' and weights summing to one, in the
/// order of the points handed in.
template <class T>
struct AffineProjection {
  Vec<T> y;
  Vec<T> lambda;
};

/// Projection of 0 onto aff{points}. `qr` must factor the differences
/// points[j] - points[0], j = 1..k-1, in that order; points[0] is the anchor.
template <class T>
AffineProjection<T> project_affine_hull(const std::vector<Vec<T>>& points, const QrUpdater<T>& qr) {
  if (points.empty()) throw InvalidArgument("project_affine_hull: no points");
  const auto& anchor = points.front();
  require_same_size(points.size() - 1, qr.size(), "project_affine_hull QR columns");
  const Vec<T> qtc = qr.apply_qt(anchor);
  Vec<T> gamma = qr.solve_r(qtc);
  for (auto& g : gamma) g = -g;
  AffineProjection<T> out{anchor, Vec<T>(points.size(), T(0))};
  T rest(0);
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    axpy<T>(gamma[i], qr.columns()[i], out.y);
    out.lambda[i + 1] = gamma[i];
    rest += gamma[i];
  }
  out.lambda[0] = T(1) - rest;
  return out;
}

template <class T>
struct RatioTest {
  T t_bar;
  std::optional<std::size_t> leaving;
};

/// Largest t in [0, 1] keeping current + t (target - current) >= 0. The
/// leaving index is the smallest one whose blended weight reaches zero.
template <class T>
RatioTest<T> ratio_test(std::span<const T> current, std::span<const T> target) {
  require_same_size(current.size(), target.size(), "ratio_test");
  RatioTest<T> out{T(1), std::nullopt};
  for (std::size_t j = 0; j < current.size(); ++j) {
    const T d = target[j] - current[j];
    if (!(d < T(0)) || target[j] > T(0)) continue;
    T t = current[j] / -d;
    if (t < T(0)) t = T(0);
    if (!out.leaving || t < out.t_bar) {
      out.t_bar = t;
      out.leaving = j;
    }
  }
  return out;
}

template <class T>
RatioTest<T> ratio_test(const Vec<T>& current, const Vec<T>& target) {
  return ratio_test<T>(std::span<const T>(current), std::span<const T>(target));
}

/// What one outer iteration did, for tracing and invariant checks.
struct StepRecord {
  StepStatus status = StepStatus::AlreadyOptimal;
  std::size_t entering = 0;
  std::size_t inner_iters = 0;
  std::size_t stalls = 0;
  std::vector<std::size_t> active_before;
  std::vector<std::size_t> active_after;
  double norm_before = 0.0;
  double norm_after = 0.0;
};

/// Live state of the primal active-set method for the minimum-norm point of
/// conv(points).
template <class T = double>
class MinNormState {
 public:
  using Observer = std::function<void(const MinNormState&, const StepRecord&)>;

  MinNormState(std::size_t ambient_dim, QpConfig config = {})
      : m_(ambient_dim), config_(config), qr_(ambient_dim, T(config.rank_tol)), y_(ambient_dim, T(0)) {}

  std::size_t ambient_dim() const { return m_; }
  std::size_t size() const { return points_.size(); }
  const QpConfig& config() const { return config_; }
  const std::vector<Vec<T>>& points() const { return points_; }
  const Vec<T>& point(std::size_t j) const { return points_[j]; }
  const Vec<T>& lambda() const { return lambda_; }
  /// Active indices; the first is the anchor of the QR differences.
  const std::vector<std::size_t>& active() const { return active_; }
  const QrUpdater<T>& qr() const { return qr_; }
  const Vec<T>& y() const { return y_; }
  T norm_y() const { return norm<T>(y_); }
  std::size_t inner_count() const { return inner_count_; }
  std::size_t outer_count() const { return outer_count_; }
  std::size_t stall_count() const { return stall_count_; }

  std::vector<std::size_t> sorted_active() const {
    auto s = active_;
    std::sort(s.begin(), s.end());
    return s;
  }

  /// Appends a generator with zero weight. Returns its index.
  std::size_t add_point(Vec<T> c) {
    require_same_size(m_, c.size(), "MinNormState::add_point");
    points_.push_back(std::move(c));
    lambda_.push_back(T(0));
    if (points_.size() == 1) reset_to_vertex(0);
    return points_.size() - 1;
  }

  /// lambda = e_j.
  void reset_to_vertex(std::size_t j) {
    check_index(j);
    std::fill(lambda_.begin(), lambda_.end(), T(0));
    lambda_[j] = T(1);
    active_.assign(1, j);
    qr_.clear();
    y_ = points_[j];
  }

  std::size_t min_norm_vertex() const {
    if (points_.empty()) throw InvalidArgument("MinNormState: no points");
    std::size_t best = 0;
    T best_sq = dot<T>(points_[0], points_[0]);
    for (std::size_t j = 1; j < points_.size(); ++j) {
      const T v = dot<T>(points_[j], points_[j]);
      if (v < best_sq) {
        best_sq = v;
        best = j;
      }
    }
    return best;
  }

  /// Installs simplex weights whose support must be affinely independent.
  /// Falls back to a fresh solve over the supported points when the support
  /// turns out numerically dependent.
  void set_weights(Vec<T> lambda) {
    require_same_size(points_.size(), lambda.size(), "MinNormState::set_weights");
    T total(0);
    for (const auto& l : lambda) {
      if (l < T(0)) throw InvalidArgument("MinNormState::set_weights: negative weight");
      total += l;
    }
    if (!(total > T(0))) throw InvalidArgument("MinNormState::set_weights: weights sum to zero");
    lambda_ = std::move(lambda);
    active_.clear();
    for (std::size_t j = 0; j < lambda_.size(); ++j)
      if (lambda_[j] > T(0)) active_.push_back(j);
    if (!rebuild_qr()) {
      const auto support = active_;
      std::size_t start = support.front();
      for (std::size_t j : support)
        if (dot<T>(points_[j], points_[j]) < dot<T>(points_[start], points_[start])) start = j;
      reset_to_vertex(start);
      std::vector<bool> allowed(points_.size(), false);
      for (std::size_t j : support) allowed[j] = true;
      while (step_restricted(&allowed).status == StepStatus::Progress) {
      }
      return;
    }
    recompute_y();
  }

  /// Removes every point whose mask entry is false. Removed points must carry
  /// zero weight.
  void compact(const std::vector<bool>& keep) {
    require_same_size(points_.size(), keep.size(), "MinNormState::compact");
    std::vector<std::size_t> new_index(points_.size(), kUnlimited);
    std::size_t next = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (keep[j]) {
        new_index[j] = next++;
      } else if (lambda_[j] > T(0)) {
        throw InvalidArgument("MinNormState::compact: cannot drop a supported point");
      }
    }
    std::vector<Vec<T>> pts;
    Vec<T> lam;
    pts.reserve(next);
    lam.reserve(next);
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (!keep[j]) continue;
      pts.push_back(std::move(points_[j]));
      lam.push_back(lambda_[j]);
    }
    points_ = std::move(pts);
    lambda_ = std::move(lam);
    for (auto& a : active_) a = new_index[a];
  }

  /// Replaces the generator list wholesale with new points and weights.
  void assign(std::vector<Vec<T>> points, Vec<T> lambda) {
    for (const auto& p : points) require_same_size(m_, p.size(), "MinNormState::assign");
    points_ = std::move(points);
    lambda_.assign(points_.size(), T(0));
    set_weights(std::move(lambda));
  }

  /// One outer iteration of the active-set method.
  StepRecord step() { return step_restricted(nullptr); }

  /// Outer iterations until optimal or a budget runs out. Budgets are
  /// checked only between outer iterations.
  QpStatus solve(const Observer& observer = {}) {
    const std::size_t inner_start = inner_count_;
    const std::size_t outer_start = outer_count_;
    while (true) {
      if (outer_count_ - outer_start >= config_.max_outer || inner_count_ - inner_start >= config_.max_inner) {
        if (!violators(nullptr).empty()) return QpStatus::InnerBudgetExhausted;
        return QpStatus::Optimal;
      }
      StepRecord rec = step();
      if (observer && rec.status == StepStatus::Progress) observer(*this, rec);
      if (rec.status == StepStatus::AlreadyOptimal) return QpStatus::Optimal;
    }
  }

 private:
  void check_index(std::size_t j) const {
    if (j >= points_.size()) {
      throw IndexOutOfRange("MinNormState: point index " + std::to_string(j) + " >= " +
                            std::to_string(points_.size()));
    }
  }

  Vec<T> difference(std::size_t j) const { return subtract<T>(points_[j], points_[active_.front()]); }

  bool rebuild_qr() {
    qr_.clear();
    for (std::size_t i = 1; i < active_.size(); ++i) {
      if (qr_.insert_column(difference(active_[i])) != InsertStatus::Inserted) return false;
    }
    return true;
  }

  void recompute_y() {
    // Anchor-relative sum keeps the absolute error proportional to the
    // spread of the active points rather than their distance from 0.
    const auto& anchor = points_[active_.front()];
    y_ = anchor;
    for (std::size_t i = 1; i < active_.size(); ++i) {
      const std::size_t j = active_[i];
      for (std::size_t r = 0; r < m_; ++r) y_[r] += lambda_[j] * (points_[j][r] - anchor[r]);
    }
  }

  T threshold() const {
    const T sq = dot<T>(y_, y_);
    return sq - T(config_.enter_tol) * sq;
  }

  /// Violating indices, most violated first, smallest index on ties.
  std::vector<std::size_t> violators(const std::vector<bool>* allowed) const {
    const T thr = threshold();
    std::vector<std::pair<T, std::size_t>> cand;
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (allowed && !(*allowed)[j]) continue;
      if (lambda_[j] > T(0)) continue;
      const T v = dot<T>(y_, points_[j]);
      if (v < thr) cand.emplace_back(v, j);
    }
    std::sort(cand.begin(), cand.end());
    std::vector<std::size_t> out;
    out.reserve(cand.size());
    for (const auto& c : cand) out.push_back(c.second);
    return out;
  }

  struct Snapshot {
    Vec<T> lambda;
    std::vector<std::size_t> active;
    QrUpdater<T> qr;
    Vec<T> y;
  };

  Snapshot snapshot() const { return {lambda_, active_, qr_, y_}; }

  void restore(Snapshot s) {
    lambda_ = std::move(s.lambda);
    active_ = std::move(s.active);
    qr_ = std::move(s.qr);
    y_ = std::move(s.y);
  }

  std::vector<Vec<T>> active_points() const {
    std::vector<Vec<T>> pts;
    pts.reserve(active_.size());
    for (std::size_t j : active_) pts.push_back(points_[j]);
    return pts;
  }

  void drop_active(std::size_t pos) {
    lambda_[active_[pos]] = T(0);
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(pos));
    if (pos == 0) {
      if (!rebuild_qr()) throw NumericError("MinNormState: active set became affinely dependent");
    } else {
      qr_.remove_column(pos - 1);
    }
  }

  enum class Inner { Done, EnteringLeft };

  /// Lines 8-20: inner loop after `entering` joined the active set.
  Inner run_inner(std::size_t entering, std::size_t& inner_iters) {
    while (true) {
      ++inner_iters;
      const auto proj = project_affine_hull<T>(active_points(), qr_);
      Vec<T> cur(active_.size());
      for (std::size_t i = 0; i < active_.size(); ++i) cur[i] = lambda_[active_[i]];
      // Ratio test over positions, ties resolved towards the smallest point index.
      T t_bar(1);
      std::optional<std::size_t> leave_pos;
      for (std::size_t i = 0; i < active_.size(); ++i) {
        const T target = proj.lambda[i];
        if (target > T(0)) continue;
        const T d = target - cur[i];
        T t = d < T(0) ? cur[i] / -d : T(0);
        if (t < T(0)) t = T(0);
        if (!leave_pos || t < t_bar || (t == t_bar && active_[i] < active_[*leave_pos])) {
          t_bar = t;
          leave_pos = i;
        }
      }
      if (!leave_pos) {
        for (std::size_t i = 0; i < active_.size(); ++i) lambda_[active_[i]] = proj.lambda[i];
        y_ = proj.y;
        return Inner::Done;
      }
      if (active_[*leave_pos] == entering) return Inner::EnteringLeft;
      for (std::size_t i = 0; i < active_.size(); ++i) {
        T v = cur[i] + t_bar * (proj.lambda[i] - cur[i]);
        lambda_[active_[i]] = v > T(0) ? v : T(0);
      }
      drop_active(*leave_pos);
      normalize_active();
      recompute_y();
    }
  }

  void normalize_active() {
    T total(0);
    for (std::size_t j : active_) total += lambda_[j];
    for (std::size_t j : active_) lambda_[j] /= total;
  }

  StepRecord step_restricted(const std::vector<bool>* allowed) {
    StepRecord rec;
    rec.active_before = sorted_active();
    rec.norm_before = static_cast<double>(norm_y());
    const T old_norm_sq = dot<T>(y_, y_);
    for (std::size_t entering : violators(allowed)) {
      Snapshot saved = snapshot();
      if (qr_.insert_column(difference(entering)) != InsertStatus::Inserted) continue;
      active_.push_back(entering);
      std::size_t inner_iters = 0;
      Inner result = Inner::Done;
      try {
        result = run_inner(entering, inner_iters);
      } catch (const NumericError&) {
        result = Inner::EnteringLeft;
      }
      inner_count_ += inner_iters;
      if (result == Inner::EnteringLeft || !(dot<T>(y_, y_) < old_norm_sq)) {
        restore(std::move(saved));
        ++stall_count_;
        ++rec.stalls;
        continue;
      }
      ++outer_count_;
      rec.status = StepStatus::Progress;
      rec.entering = entering;
      rec.inner_iters = inner_iters;
      rec.active_after = sorted_active();
      rec.norm_after = static_cast<double>(norm_y());
      return rec;
    }
    rec.active_after = rec.active_before;
    rec.norm_after = rec.norm_before;
    return rec;
  }

  std::size_t m_;
  QpConfig config_;
  std::vector<Vec<T>> points_;
  Vec<T> lambda_;
  std::vector<std::size_t> active_;
  QrUpdater<T> qr_;
  Vec<T> y_;
  std::size_t inner_count_ = 0;
  std::size_t outer_count_ = 0;
  std::size_t stall_count_ = 0;
};

template <class T>
struct MinNormResult {
  MinNormState<T> state;
  QpStatus status;
};

/// Minimum-norm point of conv(points), started at `start` or at the point of
/// smallest norm.
template <class T = double>
MinNormResult<T> min_norm_point(const std::vector<Vec<T>>& points, std::optional<std::size_t> start = std::nullopt,
                                const QpConfig& config = {},
                                const typename MinNormState<T>::Observer& observer = {}) {
  if (points.empty()) throw InvalidArgument("min_norm_point: no points");
  MinNormState<T> state(points.front().size(), config);
  for (const auto& p : points) state.add_point(p);
  state.reset_to_vertex(start ? *start : state.min_norm_vertex());
  const QpStatus status = state.solve(observer);
  return {std::move(state), status};
}

/// Warm-started variant: continues from an existing state after new points
/// were added to it.
template <class T>
QpStatus min_norm_point(MinNormState<T>& state, const typename MinNormState<T>::Observer& observer = {}) {
  return state.solve(observer);
}

}  // namespace vnqp

#endif  // VNQP_MIN_NORM_HPP
