#pragma once

#include <stdexcept>
#include <string>

namespace latdens {

// Base of every library error. The exit code is what the command-line front end returns.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class NotAUnit : public Error {
 public:
  using Error::Error;
};

class NegativeValuation : public Error {
 public:
  using Error::Error;
};

class OddDimension : public Error {
 public:
  using Error::Error;
};

class NegativeUnipotentDim : public Error {
 public:
  using Error::Error;
};

class MissingFieldData : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotStabilized : public Error {
 public:
  using Error::Error;
};

}  // namespace latdens
