#pragma once

#include <stdexcept>
#include <string>

namespace mpsdg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported mesh input.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, CFL violations detected by the limiter, solver breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpsdg
