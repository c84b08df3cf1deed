#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vnqp/matrix_io.hpp"

using vnqp::DenseMatrix;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("vnqp_io_" + name);
}

}  // namespace

TEST(BinaryMatrix, HeaderLayout) {
  DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6.5});
  const std::string bytes = vnqp::encode_binary_matrix(a);
  ASSERT_EQ(bytes.size(), 16u + 6 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "VNMX");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3);
  for (int i = 12; i < 16; ++i) EXPECT_EQ(bytes[i], 0);
  // 1.0 little-endian: 00 .. 00 f0 3f
  EXPECT_EQ(static_cast<unsigned char>(bytes[16 + 7]), 0x3f);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16 + 6]), 0xf0);
}

TEST(BinaryMatrix, RoundTripThroughFile) {
  DenseMatrix a(3, 2, {0.1, -2.5, 1e-300, 7, 8, -0.0});
  const auto path = temp_path("rt.bin");
  vnqp::write_matrix(path, a);
  EXPECT_EQ(vnqp::read_matrix(path), a);
  std::filesystem::remove(path);
}

TEST(BinaryMatrix, TruncatedPayloadRejected) {
  DenseMatrix a(2, 2, {1, 2, 3, 4});
  std::string bytes = vnqp::encode_binary_matrix(a);
  bytes.pop_back();
  EXPECT_THROW(vnqp::decode_binary_matrix(bytes), vnqp::IoError);
}

TEST(CsvMatrix, RoundTripExact) {
  DenseMatrix a(2, 2, {0.1, 1.0 / 3.0, -7, 2e-17});
  const auto path = temp_path("rt.csv");
  vnqp::write_matrix(path, a);
  EXPECT_EQ(vnqp::read_matrix(path), a);
  std::filesystem::remove(path);
}

TEST(CsvMatrix, RowsAreLines) {
  const DenseMatrix a = vnqp::decode_csv_matrix("1,2,3\n4,5,6\n");
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a.cols(), 3u);
  EXPECT_EQ(a(1, 0), 4);
  EXPECT_EQ(a(0, 2), 3);
}

TEST(CsvMatrix, Malformed) {
  EXPECT_THROW(vnqp::decode_csv_matrix("1,2\n3\n"), vnqp::IoError);
  EXPECT_THROW(vnqp::decode_csv_matrix("1,x\n"), vnqp::IoError);
  EXPECT_THROW(vnqp::decode_csv_matrix(""), vnqp::IoError);
}

TEST(MatrixFile, MissingFile) {
  EXPECT_THROW(vnqp::read_matrix(temp_path("does_not_exist.bin")), vnqp::IoError);
}
