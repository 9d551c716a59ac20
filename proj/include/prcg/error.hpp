#pragma once

#include <stdexcept>
#include <string>

namespace prcg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative SIR,
/// nonpositive rate, index out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A success probability of 1 (or more) was requested; that needs an
/// infinite SIR.
class InfeasibleTargetError : public Error {
 public:
  using Error::Error;
};

/// The queue is not stable: success probability does not exceed λτ.
class UnstableQueueError : public Error {
 public:
  using Error::Error;
};

/// The efficiency curve is not sigmoidal enough to have an interior
/// maximizer of f(γ)/γ.
class InvalidEfficiencyError : public Error {
 public:
  using Error::Error;
};

/// A user set whose total size is not below 1.
class InfeasibleSetError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the instance is too large.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or command-line input. `field` names the offending
/// entry (e.g. "users[2].delay").
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace prcg
