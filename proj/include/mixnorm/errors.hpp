#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mixnorm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A problem spec whose derived exponent falls outside its admissible range.
class InfeasibleSpecError : public Error {
 public:
  InfeasibleSpecError(const std::string& what, double value)
      : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// A summability exponent below the admissible lower bound lambda.
class RangeViolationError : public Error {
 public:
  RangeViolationError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Target point is not on the face spanned by the hull vertices.
class NotOnFaceError : public Error {
 public:
  NotOnFaceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateSimplexError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent combination of inputs (e.g. codomain axis without a codomain norm).
class SpecError : public Error {
 public:
  using Error::Error;
};

class DegenerateGradientError : public Error {
 public:
  using Error::Error;
};

class DegenerateFormError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured pattern budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double required)
      : Error(what), required_(required) {}
  /// Number of patterns the enumeration would need (may exceed 2^64, hence double).
  double required() const noexcept { return required_; }

 private:
  double required_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An experiment declined to run because its precondition does not hold.
class RefusedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixnorm
