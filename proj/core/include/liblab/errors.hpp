#pragma once

#include <stdexcept>
#include <string>

namespace liblab {

/// Input violates a documented precondition (non-Hermitian matrix, nonzero trace, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds what an exact routine is allowed to enumerate.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Vector or matrix dimensions are incompatible with the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace liblab
