#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfholes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Refusal to allocate past a configured resource cap (coefficients, lattice points).
class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

// A zero census could not reach a verdict (zero pinned to a contour, refinement exhausted).
class CensusFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path) : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys)
      : Error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

}  // namespace bfholes
