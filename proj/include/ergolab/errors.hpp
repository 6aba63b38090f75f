#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed configs, mismatched observable/system types,
// formula preconditions (tags) not met. CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct TypeMismatch : ConfigError {
  using ConfigError::ConfigError;
};

// A limit formula was asked for on a system that does not carry the
// required tag. Never silent.
struct AssumptionError : ConfigError {
  using ConfigError::ConfigError;
};

struct CommutationError : ConfigError {
  using ConfigError::ConfigError;
};

// NaN propagation, clamp beyond tolerance. CLI exit code 3.
struct NumericalFailure : Error {
  using Error::Error;
};

// Configured work/memory caps exceeded. CLI exit code 4.
struct CapExceeded : Error {
  using Error::Error;
};

struct HorizonExhausted : CapExceeded {
  using CapExceeded::CapExceeded;
};

struct SupportExplosion : CapExceeded {
  using CapExceeded::CapExceeded;
};

}  // namespace ergolab
