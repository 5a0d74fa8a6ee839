#pragma once

#include <stdexcept>
#include <string>

namespace nlreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input; `field` names the offending config path when known.
class ValidationError : public Error {
public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Density evaluated at z = 0.
class SingularPointError : public Error {
public:
  using Error::Error;
};

/// Tabulated data queried outside its range.
class ExtrapolationError : public Error {
public:
  using Error::Error;
};

/// An integral that should be finite grows without bound under refinement.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// A radius search ran out of candidates.
class SearchError : public Error {
public:
  using Error::Error;
};

/// Kernel lacks the structure needed by an operation (e.g. neither A3 condition holds).
class UnsupportedKernelError : public Error {
public:
  using Error::Error;
};

/// Linear algebra or quadrature failure.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace nlreg
