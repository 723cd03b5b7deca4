// Shared scalar/vector aliases and the error taxonomy used across the library.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mjds {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr const char* kVersion = "mjds 0.1.0";

// Bad arguments or malformed inputs.  Mapped to exit code 1 by the CLI.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A delay pattern outside the system's alphabet.
class AlphabetViolation : public ValidationError {
 public:
  explicit AlphabetViolation(const std::string& msg) : ValidationError(msg) {}
};

// NaN/Inf escaping from dynamics or accumulation.  Exit code 2.
class NumericFault : public std::runtime_error {
 public:
  explicit NumericFault(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem trouble (unwritable output dir, unreadable input).  Exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mjds
