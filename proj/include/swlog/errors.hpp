#pragma once

#include <stdexcept>
#include <string>

namespace swlog {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Generator whose state graph is not strongly connected.
class NonIrreducibleError : public Error {
 public:
  using Error::Error;
};

// Linear system with no usable pivot (degenerate generator).
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

// Per-regime vectors whose lengths disagree with the generator dimension.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Increment and regime arrays of incompatible lengths.
class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

// A state update produced NaN or an unexpected infinity.
class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

// Coarsening factor that does not divide the lattice size.
class NonDivisorError : public Error {
 public:
  using Error::Error;
};

// Step sizes that do not nest on a common grid.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// Input on which the requested statistic is undefined.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Empty sample set.
class EmptySampleError : public Error {
 public:
  using Error::Error;
};

// Model without a stationary density of the required form.
class NotPermanentError : public Error {
 public:
  using Error::Error;
};

// Computation that exceeded the representable range or an internal budget.
class NumericalOverflowError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration value; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace swlog
