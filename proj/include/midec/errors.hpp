#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace midec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation is not implemented for this (generator, dimension) combination.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed numerical input (e.g. densities that do not normalize).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a sampler does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An inner optimization did not reach its stopping tolerance.
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// A chain produced a non-finite value. Carries the state it was stepping from.
class ChainFailure : public Error {
 public:
  ChainFailure(const std::string& what, Eigen::VectorXd state)
      : Error(what), state_(std::move(state)) {}

  const Eigen::VectorXd& state() const noexcept { return state_; }

 private:
  Eigen::VectorXd state_;
};

/// Invalid experiment configuration or an IO failure while reading/writing it.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, std::string field, const std::string& message)
      : Error(format(path, field, message)),
        path_(std::move(path)),
        field_(std::move(field)) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& path, const std::string& field,
                            const std::string& message) {
    std::string out = path.empty() ? std::string("<config>") : path;
    if (!field.empty()) out += ": field '" + field + "'";
    return out + ": " + message;
  }

  std::string path_;
  std::string field_;
};

}  // namespace midec
