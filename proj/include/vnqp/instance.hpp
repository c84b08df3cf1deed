#ifndef VNQP_INSTANCE_HPP
#define VNQP_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"

namespace vnqp {

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// m x n matrix with i.i.d. U[0,1) - shift entries (filled column by column
/// from std::mt19937_64 seeded with `seed`), every column scaled to unit
/// 2-norm. A column that comes out exactly zero is left as is.
inline DenseMatrix generate_instance(std::size_t m, std::size_t n, double shift, std::uint64_t seed) {
  if (!(shift > 0.0 && shift < 1.0)) throw InvalidArgument("generate_instance: shift must lie in (0,1)");
  if (m == 0 || n == 0) throw InvalidArgument("generate_instance: empty dimensions");
  std::mt19937_64 rng(seed);
  std::vector<double> data(m * n);
  for (std::size_t j = 0; j < n; ++j) {
    double* col = data.data() + j * m;
    double sq = 0;
    for (std::size_t i = 0; i < m; ++i) {
      col[i] = uniform01(rng) - shift;
      sq += col[i] * col[i];
    }
    const double len = std::sqrt(sq);
    if (len > 0.0)
      for (std::size_t i = 0; i < m; ++i) col[i] /= len;
  }
  return DenseMatrix(m, n, std::move(data));
}

}  // namespace vnqp

#endif  // VNQP_INSTANCE_HPP
