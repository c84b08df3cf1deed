#ifndef VNQP_PLANAR_HPP
#define VNQP_PLANAR_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "vnqp/error.hpp"

namespace vnqp {

class ZeroDirection : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

template <class T>
using Point2 = std::array<T, 2>;

template <class T = double>
struct Polygon {
  std::vector<Point2<T>> vertices;
};

/// Disk of radius r centred at (0, r), so the origin sits on its boundary.
template <class T = double>
struct TangentDisk {
  T radius;
};

template <class T = double>
class PlanarSet {
 public:
  static PlanarSet polygon(std::vector<Point2<T>> vertices) {
    if (vertices.empty()) throw InvalidArgument("PlanarSet: polygon needs vertices");
    if (!convex_position(vertices)) throw InvalidArgument("PlanarSet: polygon vertices not in convex position");
    return PlanarSet(Polygon<T>{std::move(vertices)});
  }

  static PlanarSet tangent_disk(T radius) {
    if (!(radius > T(0))) throw InvalidArgument("PlanarSet: disk radius must be positive");
    return PlanarSet(TangentDisk<T>{radius});
  }

  const std::variant<Polygon<T>, TangentDisk<T>>& shape() const { return shape_; }
  bool is_disk() const { return std::holds_alternative<TangentDisk<T>>(shape_); }

  /// Vertices in order, strictly convex turns of one orientation. Fewer than
  /// three vertices are accepted when distinct.
  static bool convex_position(const std::vector<Point2<T>>& v) {
    const std::size_t k = v.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (v[i] == v[j]) return false;
    if (k < 3) return true;
    int sign = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& p = v[i];
      const auto& q = v[(i + 1) % k];
      const auto& r = v[(i + 2) % k];
      const T cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
      const int s = cross > T(0) ? 1 : (cross < T(0) ? -1 : 0);
      if (s == 0) return false;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
    // Turning in one direction is not enough for a self-intersecting star;
    // require the total winding to be one turn.
    T angle(0);
    using std::atan2;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& p = v[i];
      const auto& q = v[(i + 1) % k];
      const auto& r = v[(i + 2) % k];
      const T ax = q[0] - p[0], ay = q[1] - p[1];
      const T bx = r[0] - q[0], by = r[1] - q[1];
      angle += atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    using std::abs;
    const T two_pi = T(2) * T(3.14159265358979323846);
    return abs(abs(angle) - two_pi) < T(1e-6);
  }

 private:
  explicit PlanarSet(std::variant<Polygon<T>, TangentDisk<T>> s) : shape_(std::move(s)) {}

  std::variant<Polygon<T>, TangentDisk<T>> shape_;
};

/// Minimizer of y^T s over the set.
template <class T>
Point2<T> planar_lmo(const PlanarSet<T>& set, const Point2<T>& y) {
  using std::sqrt;
  const T ny = sqrt(y[0] * y[0] + y[1] * y[1]);
  if (!(ny >= T(1e-300))) throw ZeroDirection("planar_lmo: direction is zero");
  if (const auto* disk = std::get_if<TangentDisk<T>>(&set.shape())) {
    const T r = disk->radius;
    const T ux = y[0] / ny;
    const T uy = y[1] / ny;
    // s = (0, r) - r*u. Near u = (0, 1) the second coordinate cancels, so use
    // 1 - uy = ux^2 / (1 + uy) there.
    const T sy = uy > T(0) ? r * (ux * ux) / (T(1) + uy) : r * (T(1) - uy);
    return {-r * ux, sy};
  }
  const auto& verts = std::get<Polygon<T>>(set.shape()).vertices;
  std::size_t best = 0;
  T best_val = y[0] * verts[0][0] + y[1] * verts[0][1];
  for (std::size_t j = 1; j < verts.size(); ++j) {
    const T v = y[0] * verts[j][0] + y[1] * verts[j][1];
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  return verts[best];
}

}  // namespace vnqp

#endif  // VNQP_PLANAR_HPP
