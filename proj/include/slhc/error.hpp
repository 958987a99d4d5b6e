#pragma once

#include <stdexcept>
#include <string>

namespace slhc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A point pair (i, j) with i == j or an index outside [0, n).
class InvalidPairError : public Error {
  public:
    using Error::Error;
};

/// Two objects over a different number of points were combined.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Exhaustive enumeration requested beyond the desk-scale bound.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// A measurement or parameter outside a noise model's support.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A rejection sampler ran out of attempts.
class SamplingError : public Error {
  public:
    using Error::Error;
};

/// Malformed argument: bad value, empty input, parse failure.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace slhc
