#pragma once

#include <stdexcept>
#include <string>

namespace isacsim {

/// Operand dimensions do not match the operation's contract.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A numerical routine could not produce a usable result (non-convergence,
/// non-finite input, factorization breakdown after jitter escalation).
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent configuration value; message names the key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed text input; message carries line and field position.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid input whose content contradicts the declared layout
/// (wrong dimensions, missing section); message names the offender.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace isacsim
