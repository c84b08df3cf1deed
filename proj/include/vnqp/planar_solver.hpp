#ifndef VNQP_PLANAR_SOLVER_HPP
#define VNQP_PLANAR_SOLVER_HPP

#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/min_norm.hpp"
#include "vnqp/planar.hpp"

namespace vnqp {

template <class T = double>
struct PlanarConfig {
  std::size_t max_steps = 200;
  T eps = T(0);  // stop once ||y|| <= eps
  QpConfig qp;
};

/// One iterate. C[0] is y0 and C[i] is s_i, so `support` indexes into
/// {y0, s_1, s_2, ...}.
template <class T = double>
struct PlanarStep {
  std::size_t iter = 0;
  T norm_y;
  Point2<T> y;
  Point2<T> s;
  std::vector<std::size_t> support;
  std::vector<T> weights;
};

namespace detail {

template <class T>
bool on_boundary(const PlanarSet<T>& set, const Point2<T>& p) {
  using std::abs;
  using std::sqrt;
  if (const auto* disk = std::get_if<TangentDisk<T>>(&set.shape())) {
    const T d = sqrt(p[0] * p[0] + (p[1] - disk->radius) * (p[1] - disk->radius));
    return abs(d - disk->radius) <= T(1e-12) * disk->radius;
  }
  const auto& v = std::get<Polygon<T>>(set.shape()).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const T ex = b[0] - a[0], ey = b[1] - a[1];
    const T len = sqrt(ex * ex + ey * ey);
    if (len == T(0)) continue;
    const T cross = ex * (p[1] - a[1]) - ey * (p[0] - a[0]);
    const T along = ex * (p[0] - a[0]) + ey * (p[1] - a[1]);
    if (abs(cross) <= T(1e-12) * len * len && along >= -T(1e-12) * len * len && along <= len * len * (1 + T(1e-12)))
      return true;
  }
  return false;
}

}  // namespace detail

/// Iterates s_{i+1} = argmin_{s in S} y_i^T s, y_{i+1} = P_conv{y0, s_1..s_{i+1}}(0)
/// with no aggregation. Stops when ||y|| <= eps, when the oracle repeats a
/// point already in C, or after max_steps.
template <class T>
std::vector<PlanarStep<T>> run_planar(const PlanarSet<T>& set, const Point2<T>& y0,
                                      const PlanarConfig<T>& config = {}) {
  if (y0[0] == T(0) && y0[1] == T(0)) throw InvalidArgument("run_planar: y0 must be nonzero");
  if (!detail::on_boundary(set, y0)) throw InvalidArgument("run_planar: y0 must lie on the boundary");
  MinNormState<T> qp(2, config.qp);
  qp.add_point({y0[0], y0[1]});
  std::vector<PlanarStep<T>> trace;
  auto record = [&](std::size_t iter, const Point2<T>& s) {
    PlanarStep<T> st{iter, qp.norm_y(), {qp.y()[0], qp.y()[1]}, s, qp.sorted_active(), {}};
    for (std::size_t j : st.support) st.weights.push_back(qp.lambda()[j]);
    trace.push_back(std::move(st));
  };
  record(0, y0);
  for (std::size_t i = 1; i <= config.max_steps; ++i) {
    if (!(qp.norm_y() > config.eps)) break;
    const Point2<T> s = planar_lmo(set, {qp.y()[0], qp.y()[1]});
    bool repeated = false;
    for (const auto& c : qp.points())
      if (c[0] == s[0] && c[1] == s[1]) repeated = true;
    if (repeated) break;
    qp.add_point({s[0], s[1]});
    qp.solve();
    record(i, s);
  }
  return trace;
}

}  // namespace vnqp

#endif  // VNQP_PLANAR_SOLVER_HPP
