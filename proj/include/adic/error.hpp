#pragma once

#include <stdexcept>
#include <string>

namespace adic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different primes or incompatible coefficient domains.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Result cannot be distinguished from zero at the tracked precision.
class PrecisionLoss : public Error {
 public:
  using Error::Error;
};

/// A search, enumeration or Groebner computation exceeded its configured bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but the requested operation is not defined for it.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace adic
