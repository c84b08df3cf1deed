#ifndef VNQP_ERROR_HPP
#define VNQP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vnqp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (bad sizes, bad indices, malformed input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IndexOutOfRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Floating point breakdown that the algorithms cannot recover from.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SingularTriangle : public NumericError {
 public:
  using NumericError::NumericError;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(a) +
                            ", got " + std::to_string(b));
  }
}

}  // namespace vnqp

#endif  // VNQP_ERROR_HPP
