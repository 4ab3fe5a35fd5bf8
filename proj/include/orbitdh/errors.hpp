#pragma once

#include <stdexcept>
#include <string>

namespace orbitdh {

// Raised when an input violates a documented precondition (bad flag value,
// non-dominant weight, excluded root system, ...). Mapped to exit code 2 by
// the command-line tool.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when an internal consistency check fails (an identity that must
// hold for every valid input did not). Mapped to exit code 1.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline void ensure(bool condition, const std::string& message) {
  if (!condition) throw InternalError(message);
}

}  // namespace orbitdh
