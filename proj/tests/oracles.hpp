// Brute-force reference implementations used by the tests. None of these
// share code with the library beyond plain std::vector<double>.
#ifndef VNQP_TESTS_ORACLES_HPP
#define VNQP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // list of columns

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Gaussian elimination with partial pivoting on a dense row-major system.
inline std::optional<Vec> gauss_solve(std::vector<Vec> a, Vec b, double pivot_tol = 1e-13) {
  const std::size_t n = b.size();
  double scale = 0;
  for (const auto& r : a)
    for (double v : r) scale = std::max(scale, std::abs(v));
  if (scale == 0) return std::nullopt;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) <= pivot_tol * scale) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Modified Gram-Schmidt from scratch. Returns Q columns and R (row-major).
struct QrResult {
  Mat q;
  std::vector<Vec> r;
};

inline QrResult mgs(const Mat& cols) {
  const std::size_t k = cols.size();
  QrResult out{cols, std::vector<Vec>(k, Vec(k, 0.0))};
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double c = dot(out.q[i], out.q[j]);
      out.r[i][j] += c;
      for (std::size_t t = 0; t < out.q[j].size(); ++t) out.q[j][t] -= c * out.q[i][t];
    }
    const double n = nrm(out.q[j]);
    out.r[j][j] = n;
    for (auto& v : out.q[j]) v /= n;
  }
  return out;
}

inline Vec project_onto_span(const Mat& q, const Vec& v) {
  Vec out(v.size(), 0.0);
  for (const auto& col : q) {
    const double c = dot(col, v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += c * col[i];
  }
  return out;
}

struct MinNorm {
  double distance = std::numeric_limits<double>::infinity();
  Vec lambda;
  Vec y;
};

/// Projects 0 onto the affine hull of every subset of size <= m+1, keeps
/// the candidates whose weights are nonnegative and returns the nearest.
inline MinNorm face_enumeration(const Mat& points) {
  const std::size_t k = points.size();
  const std::size_t m = points.front().size();
  MinNorm best;
  std::vector<std::size_t> idx;
  auto evaluate = [&] {
    const std::size_t s = idx.size();
    // [G 1; 1^T 0] [lambda; mu] = [0; 1]
    std::vector<Vec> a(s + 1, Vec(s + 1, 0.0));
    Vec b(s + 1, 0.0);
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) a[r][c] = dot(points[idx[r]], points[idx[c]]);
      a[r][s] = 1.0;
      a[s][r] = 1.0;
    }
    b[s] = 1.0;
    auto sol = gauss_solve(a, b, 1e-12);
    if (!sol) return;
    for (std::size_t r = 0; r < s; ++r)
      if ((*sol)[r] < -1e-12) return;
    Vec y(m, 0.0);
    Vec lambda(k, 0.0);
    for (std::size_t r = 0; r < s; ++r) {
      lambda[idx[r]] = std::max(0.0, (*sol)[r]);
      for (std::size_t i = 0; i < m; ++i) y[i] += (*sol)[r] * points[idx[r]][i];
    }
    const double d = nrm(y);
    if (d < best.distance) best = {d, lambda, y};
  };
  auto recurse = [&](auto& self, std::size_t from) -> void {
    if (!idx.empty()) evaluate();
    if (idx.size() == m + 1) return;
    for (std::size_t j = from; j < k; ++j) {
      idx.push_back(j);
      self(self, j + 1);
      idx.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

/// Distance between conv(A) and conv(B) via the hull of all differences.
inline double hull_distance(const Mat& a, const Mat& b) {
  Mat diffs;
  for (const auto& p : a)
    for (const auto& q : b) {
      Vec d(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - q[i];
      diffs.push_back(d);
    }
  return face_enumeration(diffs).distance;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t m, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(m);
  for (auto& x : v) x = u(rng);
  return v;
}

inline Mat random_points(std::mt19937_64& rng, std::size_t m, std::size_t k) {
  Mat out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(random_vec(rng, m));
  return out;
}

}  // namespace oracle

#endif  // VNQP_TESTS_ORACLES_HPP
