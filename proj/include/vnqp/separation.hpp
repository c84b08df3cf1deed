#ifndef VNQP_SEPARATION_HPP
#define VNQP_SEPARATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"
#include "vnqp/qr_update.hpp"

namespace vnqp {

enum class SeparationStatus { Separated, Intersecting, IterLimit };

inline const char* to_string(SeparationStatus s) {
  switch (s) {
    case SeparationStatus::Separated: return "separated";
    case SeparationStatus::Intersecting: return "intersecting";
    case SeparationStatus::IterLimit: return "iter_limit";
  }
  return "unknown";
}

struct SeparationConfig {
  double eps = 1e-9;
  std::size_t max_iters = 1000;
  double enter_tol = 1e-12;
  double rank_tol = 1e-10;
};

/// y = Ax - Bz at exit. For Separated, min_j a_j^T y > max_k b_k^T y.
struct SeparationOutcome {
  SeparationStatus status = SeparationStatus::IterLimit;
  std::size_t iterations = 0;
  Vector y;
  Vector x;
  Vector z;
  std::vector<double> gap_trace;  // ||Ax_i - Bz_i|| per outer iteration
  std::size_t stalls = 0;
};

namespace detail {

/// Active-set state for min 0.5||Ax - Bz||^2 over two simplices. Each side
/// keeps an anchor (front of its active list); the QR factors the stacked
/// columns a_j - a_anchor and -(b_k - b_anchor) in `order_`.
class PairState {
 public:
  enum Side { SideA = 0, SideB = 1 };
  struct Tag {
    Side side;
    std::size_t index;
  };

  PairState(const DenseMatrix& a, const DenseMatrix& b, double rank_tol)
      : a_(a), b_(b), qr_(a.rows(), rank_tol), w_{Vector(a.cols(), 0.0), Vector(b.cols(), 0.0)} {}

  void start(std::size_t j, std::size_t k) {
    active_[SideA] = {j};
    active_[SideB] = {k};
    std::fill(w_[0].begin(), w_[0].end(), 0.0);
    std::fill(w_[1].begin(), w_[1].end(), 0.0);
    w_[0][j] = 1.0;
    w_[1][k] = 1.0;
    order_.clear();
    qr_.clear();
    recompute_y();
  }

  const Vector& y() const { return y_; }
  const Vector& weights(Side s) const { return w_[s]; }

  std::span<const double> point(Side s, std::size_t i) const { return s == SideA ? a_.col(i) : b_.col(i); }

  bool enter(Tag t) {
    if (qr_.insert_column(column(t)) != InsertStatus::Inserted) return false;
    active_[t.side].push_back(t.index);
    order_.push_back(t);
    return true;
  }

  enum class Inner { Done, EnteringLeft };

  Inner run_inner(Tag entering, std::size_t& inner_iters) {
    while (true) {
      ++inner_iters;
      const Vector gamma = affine_coefficients();
      // Targets per side in active-list order; anchors take 1 - sum.
      Vector target[2];
      for (int s = 0; s < 2; ++s) target[s].assign(active_[s].size(), 0.0);
      double rest[2] = {0.0, 0.0};
      std::size_t pos[2] = {1, 1};
      for (std::size_t c = 0; c < order_.size(); ++c) {
        const Side s = order_[c].side;
        target[s][pos[s]++] = gamma[c];
        rest[s] += gamma[c];
      }
      for (int s = 0; s < 2; ++s) target[s][0] = 1.0 - rest[s];

      double t_bar = 1.0;
      std::optional<Tag> leave;
      std::size_t leave_pos = 0;
      for (int s = 0; s < 2; ++s) {
        for (std::size_t i = 0; i < active_[s].size(); ++i) {
          const double tgt = target[s][i];
          if (tgt > 0.0) continue;
          const double cur = w_[s][active_[s][i]];
          const double d = tgt - cur;
          double t = d < 0.0 ? cur / -d : 0.0;
          if (t < 0.0) t = 0.0;
          const Tag cand{static_cast<Side>(s), active_[s][i]};
          if (!leave || t < t_bar ||
              (t == t_bar && (cand.side < leave->side || (cand.side == leave->side && cand.index < leave->index)))) {
            t_bar = t;
            leave = cand;
            leave_pos = i;
          }
        }
      }
      if (!leave) {
        for (int s = 0; s < 2; ++s)
          for (std::size_t i = 0; i < active_[s].size(); ++i) w_[s][active_[s][i]] = target[s][i];
        recompute_y();
        return Inner::Done;
      }
      if (leave->side == entering.side && leave->index == entering.index) return Inner::EnteringLeft;
      for (int s = 0; s < 2; ++s) {
        for (std::size_t i = 0; i < active_[s].size(); ++i) {
          double& w = w_[s][active_[s][i]];
          const double v = w + t_bar * (target[s][i] - w);
          w = v > 0.0 ? v : 0.0;
        }
      }
      drop(leave->side, leave_pos);
      normalize();
      recompute_y();
    }
  }

  struct Snapshot {
    Vector w0, w1;
    std::vector<std::size_t> act0, act1;
    std::vector<Tag> order;
    QrUpdater<double> qr;
    Vector y;
  };

  Snapshot snapshot() const { return {w_[0], w_[1], active_[0], active_[1], order_, qr_, y_}; }

  void restore(Snapshot s) {
    w_[0] = std::move(s.w0);
    w_[1] = std::move(s.w1);
    active_[0] = std::move(s.act0);
    active_[1] = std::move(s.act1);
    order_ = std::move(s.order);
    qr_ = std::move(s.qr);
    y_ = std::move(s.y);
  }

 private:
  Vector column(Tag t) const {
    const std::size_t anchor = active_[t.side].front();
    Vector c = subtract(point(t.side, t.index), point(t.side, anchor));
    if (t.side == SideB)
      for (auto& v : c) v = -v;
    return c;
  }

  Vector affine_coefficients() const {
    Vector base = subtract(point(SideA, active_[0].front()), point(SideB, active_[1].front()));
    Vector gamma = qr_.solve_r(qr_.apply_qt(base));
    for (auto& g : gamma) g = -g;
    return gamma;
  }

  void drop(Side s, std::size_t pos) {
    w_[s][active_[s][pos]] = 0.0;
    const std::size_t idx = active_[s][pos];
    active_[s].erase(active_[s].begin() + static_cast<std::ptrdiff_t>(pos));
    if (pos == 0) {
      order_.erase(std::remove_if(order_.begin(), order_.end(),
                                  [&](const Tag& t) { return t.side == s && t.index == active_[s].front(); }),
                   order_.end());
      rebuild();
      return;
    }
    for (std::size_t c = 0; c < order_.size(); ++c) {
      if (order_[c].side == s && order_[c].index == idx) {
        order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(c));
        qr_.remove_column(c);
        return;
      }
    }
  }

  void rebuild() {
    qr_.clear();
    for (const Tag& t : order_)
      if (qr_.insert_column(column(t)) != InsertStatus::Inserted)
        throw NumericError("separate_hulls: active columns became dependent");
  }

  void normalize() {
    for (int s = 0; s < 2; ++s) {
      double total = 0.0;
      for (std::size_t j : active_[s]) total += w_[s][j];
      for (std::size_t j : active_[s]) w_[s][j] /= total;
    }
  }

  void recompute_y() {
    y_.assign(a_.rows(), 0.0);
    for (std::size_t j : active_[0]) axpy(w_[0][j], a_.col(j), std::span<double>(y_));
    for (std::size_t k : active_[1]) axpy(-w_[1][k], b_.col(k), std::span<double>(y_));
  }

  const DenseMatrix& a_;
  const DenseMatrix& b_;
  QrUpdater<double> qr_;
  Vector w_[2];
  std::vector<std::size_t> active_[2];
  std::vector<Tag> order_;
  Vector y_;
};

}  // namespace detail

/// Active-set method for min 0.5||Ax - Bz||^2 with x, z on their simplices.
/// Starts from the closest vertex pair; each outer iteration enters the
/// most violated vertex (A side first) and runs the joint ratio-test loop.
inline SeparationOutcome separate_hulls(const DenseMatrix& a, const DenseMatrix& b, const SeparationConfig& config = {}) {
  require_same_size(a.rows(), b.rows(), "separate_hulls rows");
  if (a.cols() == 0 || b.cols() == 0) throw InvalidArgument("separate_hulls: empty point set");
  if (!(config.eps >= 0.0)) throw InvalidArgument("separate_hulls: eps must be nonnegative");
  using detail::PairState;

  std::size_t j0 = 0, k0 = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t k = 0; k < b.cols(); ++k) {
      const double d = norm(subtract(a.col(j), b.col(k)));
      if (d < best) {
        best = d;
        j0 = j;
        k0 = k;
      }
    }

  PairState st(a, b, config.rank_tol);
  st.start(j0, k0);
  SeparationOutcome out;
  auto finish = [&](SeparationStatus s, std::size_t iters) {
    out.status = s;
    out.iterations = iters;
    out.y = st.y();
    out.x = st.weights(PairState::SideA);
    out.z = st.weights(PairState::SideB);
    return out;
  };

  for (std::size_t iter = 0;; ++iter) {
    const Vector y = st.y();
    const double sq = dot(y, y);
    out.gap_trace.push_back(std::sqrt(sq));
    const Vector aty = a.multiply_transpose(y);
    const Vector bty = b.multiply_transpose(y);
    const double min_a = *std::min_element(aty.begin(), aty.end());
    const double max_b = *std::max_element(bty.begin(), bty.end());
    if (min_a > max_b) return finish(SeparationStatus::Separated, iter);
    if (std::sqrt(sq) <= config.eps) return finish(SeparationStatus::Intersecting, iter);
    if (iter == config.max_iters) return finish(SeparationStatus::IterLimit, iter);

    // beta = y^T A x, alpha = y^T B z; beta - alpha = ||y||^2.
    double beta = 0.0, alpha = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) beta += st.weights(PairState::SideA)[j] * aty[j];
    for (std::size_t k = 0; k < b.cols(); ++k) alpha += st.weights(PairState::SideB)[k] * bty[k];
    const double slack = config.enter_tol * sq;
    std::vector<std::pair<double, std::size_t>> cand_a, cand_b;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (st.weights(PairState::SideA)[j] == 0.0 && aty[j] < beta - slack) cand_a.emplace_back(aty[j] - beta, j);
    for (std::size_t k = 0; k < b.cols(); ++k)
      if (st.weights(PairState::SideB)[k] == 0.0 && bty[k] > alpha + slack) cand_b.emplace_back(alpha - bty[k], k);
    std::sort(cand_a.begin(), cand_a.end());
    std::sort(cand_b.begin(), cand_b.end());
    std::vector<PairState::Tag> order;
    for (const auto& c : cand_a) order.push_back({PairState::SideA, c.second});
    for (const auto& c : cand_b) order.push_back({PairState::SideB, c.second});

    bool progressed = false;
    for (const auto& t : order) {
      auto saved = st.snapshot();
      if (!st.enter(t)) continue;
      std::size_t inner = 0;
      auto result = PairState::Inner::Done;
      try {
        result = st.run_inner(t, inner);
      } catch (const NumericError&) {
        result = PairState::Inner::EnteringLeft;
      }
      if (result == PairState::Inner::EnteringLeft || !(dot(st.y(), st.y()) < sq)) {
        st.restore(std::move(saved));
        ++out.stalls;
        continue;
      }
      progressed = true;
      break;
    }
    if (!progressed) return finish(SeparationStatus::IterLimit, iter);
  }
}

}  // namespace vnqp

#endif  // VNQP_SEPARATION_HPP
