#pragma once

#include <stdexcept>
#include <string>

namespace mosharp {

/// Broad classification used by the command line runner to pick exit codes.
enum class ErrorKind {
  InvalidArgument,  ///< caller passed something outside an operation's contract
  Domain,           ///< point outside the configured box, negative growth value, ...
  Precondition,     ///< a structural assumption (margin, resolution, axiom) is violated
  Numerical,        ///< an iterative procedure could not certify its result
  Config,           ///< malformed run configuration
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

}  // namespace mosharp
