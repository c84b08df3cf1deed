#ifndef VNQP_CONE_HPP
#define VNQP_CONE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"

namespace vnqp {

/// K = R_+^{d_1} (+) ... (+) R_+^{d_B} together with the normalizing
/// functional u_bar in int K*.
class ConeSpec {
 public:
  ConeSpec() = default;

  ConeSpec(std::vector<std::size_t> blocks, Vector u_bar) : blocks_(std::move(blocks)), u_bar_(std::move(u_bar)) {
    const std::size_t total = std::accumulate(blocks_.begin(), blocks_.end(), std::size_t{0});
    require_same_size(total, u_bar_.size(), "ConeSpec u_bar");
    for (double u : u_bar_) {
      if (!(u > 0.0) || !std::isfinite(u)) throw InvalidArgument("ConeSpec: u_bar entries must be positive");
    }
  }

  /// R_+^n with u_bar = 1.
  static ConeSpec orthant(std::size_t n) { return ConeSpec({n}, Vector(n, 1.0)); }

  std::size_t dim() const { return u_bar_.size(); }
  const std::vector<std::size_t>& blocks() const { return blocks_; }
  const Vector& u_bar() const { return u_bar_; }

 private:
  std::vector<std::size_t> blocks_;
  Vector u_bar_;
};

/// Ax = 0, u_bar^T x = 1, x in K  versus  A^T y in int K*.
struct ConeProblem {
  DenseMatrix a;
  ConeSpec cone;

  ConeProblem(DenseMatrix matrix, ConeSpec spec) : a(std::move(matrix)), cone(std::move(spec)) {
    require_same_size(a.cols(), cone.dim(), "ConeProblem cone dimension");
  }

  explicit ConeProblem(DenseMatrix matrix) : ConeProblem(matrix, ConeSpec::orthant(matrix.cols())) {}

  std::size_t m() const { return a.rows(); }
  std::size_t n() const { return a.cols(); }
};

/// Minimizer p = scale * e_index of p^T A^T y over the cone section.
struct LmoResult {
  std::size_t index = 0;
  double scale = 1.0;
  double value = 0.0;

  Vector dense(std::size_t n) const {
    Vector p(n, 0.0);
    p[index] = scale;
    return p;
  }
};

inline LmoResult cone_lmo_from_aty(const ConeSpec& cone, std::span<const double> aty) {
  require_same_size(cone.dim(), aty.size(), "cone_lmo A^T y");
  if (aty.empty()) throw InvalidArgument("cone_lmo: empty cone");
  const auto& u = cone.u_bar();
  LmoResult best{0, 1.0 / u[0], aty[0] / u[0]};
  for (std::size_t j = 1; j < aty.size(); ++j) {
    const double r = aty[j] / u[j];
    if (r < best.value) best = {j, 1.0 / u[j], r};
  }
  return best;
}

inline LmoResult cone_lmo(const ConeProblem& problem, std::span<const double> y) {
  require_same_size(problem.m(), y.size(), "cone_lmo y");
  const Vector aty = problem.a.multiply_transpose(y);
  return cone_lmo_from_aty(problem.cone, aty);
}

inline bool dual_certificate(const ConeProblem& problem, std::span<const double> y, double margin = 0.0) {
  return cone_lmo(problem, y).value > margin;
}

/// max_j -a_j^T y
inline double q1_from_aty(std::span<const double> aty) {
  double q = -std::numeric_limits<double>::infinity();
  for (double v : aty) q = std::max(q, -v);
  return q;
}

}  // namespace vnqp

#endif  // VNQP_CONE_HPP
