#ifndef VNQP_MATRIX_IO_HPP
#define VNQP_MATRIX_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "vnqp/error.hpp"
#include "vnqp/linalg.hpp"

// Binary layout (little-endian):
//   bytes 0..3   magic "VNMX"
//   bytes 4..7   u32 rows
//   bytes 8..11  u32 cols
//   bytes 12..15 u32 reserved, written as 0
//   then rows*cols IEEE-754 doubles, column-major.

namespace vnqp {

class IoError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

inline double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

inline std::string encode_binary_matrix(const DenseMatrix& a) {
  std::string out;
  out.reserve(16 + 8 * a.data().size());
  out.append("VNMX", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(a.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(a.cols()));
  detail::put_u32(out, 0);
  for (double v : a.data()) detail::put_f64(out, v);
  return out;
}

inline DenseMatrix decode_binary_matrix(const std::string& bytes) {
  if (bytes.size() < 16 || bytes.compare(0, 4, "VNMX") != 0) throw IoError("not a VNMX matrix");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t rows = detail::get_u32(p + 4);
  const std::uint64_t cols = detail::get_u32(p + 8);
  if (bytes.size() != 16 + 8 * rows * cols) throw IoError("VNMX payload size does not match header");
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = detail::get_f64(p + 16 + 8 * i);
  return DenseMatrix(rows, cols, std::move(data));
}

inline std::string encode_csv_matrix(const DenseMatrix& a) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << a(i, j);
    }
    out << '\n';
  }
  return out.str();
}

inline DenseMatrix decode_csv_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError("bad CSV number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw IoError("ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV matrix");
  DenseMatrix a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  return DenseMatrix(a.rows(), a.cols(), a.data());
}

/// Reads a matrix file, choosing the format by content: VNMX magic means
/// binary, anything else is parsed as CSV.
inline DenseMatrix read_matrix(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  if (bytes.size() >= 4 && bytes.compare(0, 4, "VNMX") == 0) return decode_binary_matrix(bytes);
  return decode_csv_matrix(bytes);
}

/// Writes CSV when the extension is .csv, binary otherwise.
inline void write_matrix(const std::filesystem::path& path, const DenseMatrix& a) {
  if (path.extension() == ".csv") {
    detail::write_file(path, encode_csv_matrix(a));
  } else {
    detail::write_file(path, encode_binary_matrix(a));
  }
}

}  // namespace vnqp

#endif  // VNQP_MATRIX_IO_HPP
