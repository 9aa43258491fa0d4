#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlab {

/// Operands of a binary/ternary operation live in different dimensions.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input (norm specs, vectors, interval sets, subsets).
class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_same_dim(std::size_t lhs, std::size_t rhs, const char* what) {
  if (lhs != rhs) {
    throw dimension_error(std::string(what) + ": dimension mismatch (" + std::to_string(lhs) +
                          " vs " + std::to_string(rhs) + ")");
  }
}

}  // namespace detail
}  // namespace mlab
