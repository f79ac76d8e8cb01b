#pragma once

#include <stdexcept>
#include <string>

namespace ceed {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input vectors or matrices whose sizes do not agree with the problem.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Demand cannot be met within the generator limits.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// A model invariant was violated; `field()` names the offending field.
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// The requested operation does not support this kind of problem
// (for example a loss matrix handed to the lambda-iteration oracle).
class UnsupportedError : public Error {
public:
  using Error::Error;
};

}  // namespace ceed
