#pragma once

#include <stdexcept>
#include <string>

namespace oraclebench {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by bisection routines when the supplied upper bracket cannot be
/// made admissible.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A complexity profile that cannot be inverted (bounded where it must grow).
class InvalidProfile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for iterative solver failures; concrete errors carry the best iterate.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace oraclebench
