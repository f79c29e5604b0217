#pragma once

#include <stdexcept>
#include <string>

namespace harmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Too few usable coefficients to form an estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A normalization or certificate divides by a vanishing leading coefficient.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Differentiating a finite stream past its last coefficient.
class EmptyStreamError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A criterion was applied to coefficients outside the form it requires.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Unknown catalog name or parameter outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

}  // namespace harmap
