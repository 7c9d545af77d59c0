#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcs {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, inconsistent shapes, unknown enum names.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The requested sampling pattern cannot be realised (e.g. R too large for the ACS region).
class InfeasibleAcceleration : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Numerical breakdown: singular operators, degenerate scales, underflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularOperator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateScale : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Raised by the Langevin sampler when the iterate norm blows up.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(std::size_t step, std::size_t chain, const std::string& what)
      : NumericalError(what), step_(step), chain_(chain) {}

  std::size_t step() const noexcept { return step_; }
  std::size_t chain() const noexcept { return chain_; }

 private:
  std::size_t step_;
  std::size_t chain_;
};

enum class IoErrc {
  open_failed,
  malformed_header,
  truncated_payload,
  dimension_overflow,
  trailing_data,
  write_failed,
};

const char* to_string(IoErrc code) noexcept;

class IoError : public Error {
 public:
  IoError(IoErrc code, const std::string& what) : Error(what), code_(code) {}
  IoErrc code() const noexcept { return code_; }

 private:
  IoErrc code_;
};

}  // namespace lcs
