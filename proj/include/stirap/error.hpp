#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// A value violates a documented type invariant.
class InvalidParameter : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid-parameter"; }
};

/// Density matrix is not Hermitian / unit trace / PSD within tolerance.
class UnphysicalState : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unphysical-state"; }
};

class DegenerateModel : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate-model"; }
};

class Singularity : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singularity"; }
};

/// Configuration rejected; key() names the offending dotted key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }
  const char* kind() const noexcept override { return "config"; }

 private:
  std::string key_;
};

}  // namespace stirap
