#pragma once

#include <stdexcept>
#include <string>

namespace rotkit {

// Root of every error raised by the library. The CLI maps subclasses to
// exit codes (see tools/cli.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad range, unreduced input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Text that does not parse as the expected rational / descriptor.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A configured cap (row size, step count, bit budget) would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// b > a^gamma does not hold, or could not be certified at working precision.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

// A cf-prefix rotation number was asked for digits it does not determine.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class MatchingFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace rotkit
