#pragma once

#include <stdexcept>
#include <string>

namespace mstcov {

/// Input violates a documented precondition: bad shapes, out-of-range
/// parameters, malformed files. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical step could not complete: singular design, zero denominator,
/// failed factorization. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mstcov
