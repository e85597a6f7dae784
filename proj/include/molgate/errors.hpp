#pragma once

#include <stdexcept>
#include <string>

namespace molgate {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegistryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoCrossingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegratorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace molgate
