#ifndef VNQP_QR_UPDATE_HPP
#define VNQP_QR_UPDATE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"

namespace vnqp {

enum class InsertStatus { Inserted, DegenerateColumn };

/// Back substitution for an upper-triangular R stored by columns: column j
/// holds R(0..j, j). A diagonal entry counts as singular when it is zero or
/// smaller than singular_ratio<T>() times the largest diagonal magnitude.
template <class T>
T singular_ratio() {
  // 1e-12 for double, scaled with the machine epsilon of wider types.
  return T(1e-12) * (std::numeric_limits<T>::epsilon() / T(std::numeric_limits<double>::epsilon()));
}

template <class T>
Vec<T> solve_upper_triangular(const std::vector<Vec<T>>& r_columns, std::span<const T> rhs) {
  using std::abs;
  const std::size_t k = r_columns.size();
  require_same_size(k, rhs.size(), "solve_upper_triangular rhs");
  T max_diag(0);
  for (std::size_t j = 0; j < k; ++j) {
    if (r_columns[j].size() < j + 1) throw DimensionMismatch("solve_upper_triangular: short column");
    max_diag = std::max<T>(max_diag, abs(r_columns[j][j]));
  }
  for (std::size_t j = 0; j < k; ++j) {
    const T d = abs(r_columns[j][j]);
    if (d == T(0) || d < singular_ratio<T>() * max_diag) {
      throw SingularTriangle("solve_upper_triangular: diagonal entry " + std::to_string(j) +
                             " below threshold");
    }
  }
  Vec<T> x(rhs.begin(), rhs.end());
  for (std::size_t jj = k; jj-- > 0;) {
    x[jj] /= r_columns[jj][jj];
    const T xj = x[jj];
    for (std::size_t i = 0; i < jj; ++i) x[i] -= r_columns[jj][i] * xj;
  }
  return x;
}

/// Thin QR factorization Q R of a column list that supports appending and
/// deleting columns without refactoring. Columns are appended by classical
/// Gram-Schmidt with one reorthogonalization pass; deletions are repaired
/// with Givens rotations. R keeps a strictly positive diagonal.
template <class T = double>
class QrUpdater {
 public:
  explicit QrUpdater(std::size_t ambient_dim, T rank_tol = T(1e-10))
      : m_(ambient_dim), rank_tol_(rank_tol) {}

  std::size_t ambient_dim() const { return m_; }
  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }
  const T& rank_tol() const { return rank_tol_; }

  const std::vector<Vec<T>>& columns() const { return cols_; }
  /// Orthonormal columns of Q.
  const std::vector<Vec<T>>& q_columns() const { return q_; }
  /// Column j of R, entries R(0..j, j).
  const std::vector<Vec<T>>& r_columns() const { return r_; }

  T r(std::size_t i, std::size_t j) const { return i <= j ? r_[j][i] : T(0); }

  void clear() {
    cols_.clear();
    q_.clear();
    r_.clear();
  }

  /// Appends `column`. Leaves the factorization untouched and reports
  /// DegenerateColumn when the column is (numerically) in the current span
  /// or the factorization already has ambient_dim columns.
  InsertStatus insert_column(std::span<const T> column) {
    using std::sqrt;
    require_same_size(m_, column.size(), "QrUpdater::insert_column");
    const std::size_t k = q_.size();
    const T col_norm = norm(column);
    if (k >= m_ || col_norm == T(0)) return InsertStatus::DegenerateColumn;

    Vec<T> w(column.begin(), column.end());
    Vec<T> coeff(k + 1, T(0));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const T c = dot<T>(q_[j], w);
        coeff[j] += c;
        axpy<T>(-c, q_[j], w);
      }
    }
    const T rho = norm<T>(w);
    if (!(rho > rank_tol_ * col_norm)) return InsertStatus::DegenerateColumn;
    for (auto& v : w) v /= rho;
    coeff[k] = rho;
    q_.push_back(std::move(w));
    r_.push_back(std::move(coeff));
    cols_.emplace_back(column.begin(), column.end());
    return InsertStatus::Inserted;
  }

  InsertStatus insert_column(const Vec<T>& column) { return insert_column(std::span<const T>(column)); }

  void remove_column(std::size_t index) {
    using std::sqrt;
    const std::size_t k = q_.size();
    if (index >= k) {
      throw IndexOutOfRange("QrUpdater::remove_column: index " + std::to_string(index) + " >= " +
                            std::to_string(k));
    }
    cols_.erase(cols_.begin() + static_cast<std::ptrdiff_t>(index));
    r_.erase(r_.begin() + static_cast<std::ptrdiff_t>(index));
    // r_ is now upper Hessenberg from `index` on: column c has c + 2 entries.
    for (std::size_t c = index; c + 1 < k; ++c) {
      const T a = r_[c][c];
      const T b = r_[c][c + 1];
      const T rho = sqrt(a * a + b * b);
      if (rho != T(0)) {
        const T cs = a / rho;
        const T sn = b / rho;
        for (std::size_t col = c; col + 1 < k; ++col) {
          const T u = r_[col][c];
          const T v = r_[col][c + 1];
          r_[col][c] = cs * u + sn * v;
          r_[col][c + 1] = -sn * u + cs * v;
        }
        for (std::size_t i = 0; i < m_; ++i) {
          const T u = q_[c][i];
          const T v = q_[c + 1][i];
          q_[c][i] = cs * u + sn * v;
          q_[c + 1][i] = -sn * u + cs * v;
        }
      }
      r_[c].pop_back();
      if (r_[c][c] < T(0)) flip_sign(c);
    }
    q_.pop_back();
  }

  /// Q^T v
  Vec<T> apply_qt(std::span<const T> v) const {
    require_same_size(m_, v.size(), "QrUpdater::apply_qt");
    Vec<T> out(q_.size());
    for (std::size_t j = 0; j < q_.size(); ++j) out[j] = dot<T>(q_[j], v);
    return out;
  }

  /// Q Q^T v, the orthogonal projection of v onto the column span.
  Vec<T> project(std::span<const T> v) const {
    const Vec<T> c = apply_qt(v);
    Vec<T> out(m_, T(0));
    for (std::size_t j = 0; j < q_.size(); ++j) axpy<T>(c[j], q_[j], out);
    return out;
  }

  /// Solves R x = rhs.
  Vec<T> solve_r(std::span<const T> rhs) const { return solve_upper_triangular<T>(r_, rhs); }

 private:
  void flip_sign(std::size_t row) {
    for (std::size_t col = row; col < r_.size(); ++col) {
      if (r_[col].size() > row) r_[col][row] = -r_[col][row];
    }
    for (auto& v : q_[row]) v = -v;
  }

  std::size_t m_;
  T rank_tol_;
  std::vector<Vec<T>> cols_;
  std::vector<Vec<T>> q_;
  std::vector<Vec<T>> r_;
};

}  // namespace vnqp

#endif  // VNQP_QR_UPDATE_HPP
