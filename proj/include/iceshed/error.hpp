#pragma once

#include <stdexcept>
#include <string>

namespace iceshed {

/// Base for every error caused by bad user input (files, configuration,
/// geometry). The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class TopologyError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateElementError : public InputError {
 public:
  using InputError::InputError;
};

class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class OutOfRangeError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace iceshed
