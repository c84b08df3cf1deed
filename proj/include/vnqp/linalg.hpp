#ifndef VNQP_LINALG_HPP
#define VNQP_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vnqp/error.hpp"

namespace vnqp {

template <class T>
using Vec = std::vector<T>;

using Vector = Vec<double>;

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  return dot(std::span<const T>(a), std::span<const T>(b));
}

template <class T>
T norm(std::span<const T> a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <class T>
T norm(const Vec<T>& a) {
  return norm(std::span<const T>(a));
}

/// y += alpha * x
template <class T>
void axpy(const T& alpha, std::span<const T> x, std::span<T> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <class T>
Vec<T> subtract(std::span<const T> a, std::span<const T> b) {
  Vec<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <class T>
Vec<T> subtract(const Vec<T>& a, const Vec<T>& b) {
  return subtract(std::span<const T>(a), std::span<const T>(b));
}

/// Dense real matrix, column-major, all entries finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
      : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    require_same_size(rows * cols, data_.size(), "DenseMatrix entries");
    for (double v : data_) {
      if (!std::isfinite(v)) throw InvalidArgument("DenseMatrix: non-finite entry");
    }
  }

  /// Builds a matrix whose j-th column is columns[j].
  static DenseMatrix from_columns(const std::vector<Vector>& columns) {
    if (columns.empty()) return DenseMatrix();
    const std::size_t m = columns.front().size();
    std::vector<double> data;
    data.reserve(m * columns.size());
    for (const auto& c : columns) {
      require_same_size(m, c.size(), "DenseMatrix::from_columns");
      data.insert(data.end(), c.begin(), c.end());
    }
    return DenseMatrix(m, columns.size(), std::move(data));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }

  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }

  Vector column(std::size_t j) const {
    auto c = col(j);
    return Vector(c.begin(), c.end());
  }

  /// A x
  Vector multiply(std::span<const double> x) const {
    require_same_size(cols_, x.size(), "DenseMatrix::multiply");
    Vector out(rows_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (x[j] != 0.0) axpy<double>(x[j], col(j), out);
    }
    return out;
  }

  /// A^T y
  Vector multiply_transpose(std::span<const double> y) const {
    require_same_size(rows_, y.size(), "DenseMatrix::multiply_transpose");
    Vector out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = dot<double>(col(j), y);
    return out;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace vnqp

#endif  // VNQP_LINALG_HPP
