#pragma once

#include <stdexcept>
#include <string>

namespace qdquapi {

/// Input outside the mathematical domain of an operation (negative frequency, overflow, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature failed to converge or a propagation diagnostic tripped.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density matrix that is not a physical state within tolerance.
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration. `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qdquapi
