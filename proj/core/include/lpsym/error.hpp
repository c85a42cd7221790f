#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// An identifier that is neither a declared variable, a known function nor a
/// named constant. Also raised when differentiating with respect to a variable
/// the expression does not declare.
class UndeclaredIdentifier : public Error {
 public:
  explicit UndeclaredIdentifier(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside a function's domain (log of a non-positive value,
/// division by zero, ...). Carries the offending subexpression as text.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Evaluation at an excluded center of a canonical coordinate system.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its refinement budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Argument outside a tabulated or admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Symmetry parameters that violate a case invariant.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

}  // namespace lpsym
