#pragma once

#include <stdexcept>
#include <string>

namespace greyvar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Grey value lies where the half-space profile is flat, so phi is undefined.
class InvertibilityError : public Error {
 public:
  using Error::Error;
};

/// alpha_f vanishes; the surface estimator cannot be normalized.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Observation window clips the support of the blurred boundary zone.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A lattice sum could not be truncated within the requested tail tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double suggested_cutoff)
      : Error(what), suggested_cutoff_(suggested_cutoff) {}
  double suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  double suggested_cutoff_;
};

/// A root could not be bracketed (intensity not monotone along the normal).
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace greyvar
