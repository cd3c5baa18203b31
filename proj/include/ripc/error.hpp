#pragma once

#include <stdexcept>
#include <string>

namespace ripc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A time index needs input history that does not exist.
class InsufficientHistory : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A computation could not be carried out to the required accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The heralding norm of a conditional ladder-operator sequence vanished.
class HeraldingImpossible : public NumericalError {
 public:
  HeraldingImpossible(const std::string& what, double norm)
      : NumericalError(what), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Fock-space truncation is too small for the requested state.
class CutoffInsufficient : public NumericalError {
 public:
  CutoffInsufficient(const std::string& what, double leakage)
      : NumericalError(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ripc
