#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentivol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition (non-positive price, negative volume, bad date order, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Fewer observations than an operation needs.
class InsufficientData : public Error {
 public:
  InsufficientData(const std::string& what, std::size_t required, std::size_t actual)
      : Error(what + ": need at least " + std::to_string(required) + " observations, got " +
              std::to_string(actual)),
        required_(required),
        actual_(actual) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t required_;
  std::size_t actual_;
};

/// Design matrix is rank deficient.
class SingularDesign : public Error {
 public:
  using Error::Error;
};

/// The log-variance recursion left the representable range.
class DivergedRecursion : public Error {
 public:
  using Error::Error;
};

/// No optimizer start produced a finite optimum, or the data cannot support a fit.
class EstimationFailed : public Error {
 public:
  explicit EstimationFailed(const std::string& what, std::vector<std::string> diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sentivol
