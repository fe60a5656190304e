#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace effsel {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unreadable input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Precondition violation: out-of-range index, invalid parameter, bad bracket.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A feature whose spread is zero, so no standardized difference exists.
class DegenerateFeature : public Error {
 public:
  explicit DegenerateFeature(std::string feature)
      : Error("degenerate feature '" + feature + "': zero variance"),
        feature_(std::move(feature)) {}

  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

// An iterative routine hit its cap before reaching tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace effsel
