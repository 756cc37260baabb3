#pragma once

#include <stdexcept>
#include <string>

namespace hwb {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model / contract / numerics configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function (t > S, lf <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument outside a tabulated range (e.g. heat time beyond the horizon).
class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Evaluation at a removable-but-unhandled singularity (B(S,S) = 0 in the
// barrier mapping) or a singular linear system.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace hwb
