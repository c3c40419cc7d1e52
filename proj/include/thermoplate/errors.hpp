#pragma once

#include <stdexcept>
#include <string>

namespace thermoplate {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
};

class InvalidMode : public Error {
 public:
  using Error::Error;
};

/// A 3x3 block that should be invertible was not (construction bug).
class SingularBlock : public Error {
 public:
  using Error::Error;
};

/// The shifted block iλI - B_σ could not be inverted to working precision.
class IllConditionedBlock : public Error {
 public:
  IllConditionedBlock(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class WitnessInapplicable : public Error {
 public:
  using Error::Error;
};

class FitWindowError : public Error {
 public:
  using Error::Error;
};

class UnreliableDataError : public Error {
 public:
  using Error::Error;
};

class StabilityViolation : public Error {
 public:
  using Error::Error;
};

class ShrinkWindowError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class CsvError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoplate
