#pragma once

#include <stdexcept>
#include <string>

namespace dsloss {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid workflow configuration, CLI arguments or config file (exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed or unusable input data: bad manifests, non-finite samples,
// signals too short for an operation (exit code 3).
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

}  // namespace dsloss
