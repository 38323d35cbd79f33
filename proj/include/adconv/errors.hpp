#pragma once

#include <stdexcept>
#include <string>

namespace adconv {

/// Bad arguments: out-of-range parameters, unknown labels, wrong layouts.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of numerical guards (truncation, alignment, factorization).
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CV truncation is not a multiple of 2^k for a k-stage operation.
class AlignmentError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

/// Probability weight above the Fock cutoff exceeds the allowed leakage.
class TruncationError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

/// A qubit pair did not separate from the register after a forward stage.
class FactorizationError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

/// A qubit pair was not returned to |--> by a backward stage.
class ResidualExcitationError : public NumericalGuardError {
 public:
  explicit ResidualExcitationError(const std::string& what, std::size_t pair_index)
      : NumericalGuardError(what), pair_index_(pair_index) {}
  std::size_t pair_index() const noexcept { return pair_index_; }

 private:
  std::size_t pair_index_;
};

}  // namespace adconv
