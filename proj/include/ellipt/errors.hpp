#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ellipt {

// Base of every error raised by the library. Numerical failures and input
// validation failures are distinguished by subclass so callers (the CLI in
// particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input was rejected before any numerics ran.
class InputError : public Error {
 public:
  using Error::Error;
};

// A computation could not produce a trustworthy value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateLattice : public NumericalError {
 public:
  explicit DegenerateLattice(const std::string& what)
      : NumericalError("DegenerateLattice: " + what) {}
};

class SingularPoint : public NumericalError {
 public:
  explicit SingularPoint(const std::string& what)
      : NumericalError("SingularPoint: " + what) {}
};

class Overflow : public NumericalError {
 public:
  explicit Overflow(const std::string& what)
      : NumericalError("Overflow: " + what) {}
};

class SolveFailure : public NumericalError {
 public:
  explicit SolveFailure(const std::string& what)
      : NumericalError("SolveFailure: " + what) {}
};

class InsufficientData : public NumericalError {
 public:
  explicit InsufficientData(const std::string& what)
      : NumericalError("InsufficientData: " + what) {}
};

class StagnationStall : public NumericalError {
 public:
  explicit StagnationStall(const std::string& what)
      : NumericalError("StagnationStall: " + what) {}
};

class InvalidSpec : public InputError {
 public:
  explicit InvalidSpec(const std::string& what)
      : InputError("InvalidSpec: " + what) {}
};

class InsideObstacle : public InputError {
 public:
  explicit InsideObstacle(const std::string& what)
      : InputError("InsideObstacle: " + what) {}
};

class IoFailure : public Error {
 public:
  explicit IoFailure(const std::string& what) : Error("IoFailure: " + what) {}
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("FormatError: line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A configuration key was missing, malformed or out of range.
class ConfigError : public InputError {
 public:
  ConfigError(std::string key, const std::string& what)
      : InputError("config key \"" + key + "\": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace ellipt
