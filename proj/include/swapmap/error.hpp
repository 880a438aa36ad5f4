#pragma once

#include <stdexcept>
#include <string>

namespace swapmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range sizes, infeasible generator parameters and similar misuse.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed input file; the message carries the offending field or line.
class ParseError : public Error {
public:
  using Error::Error;
};

/// The program does not fit the device, or no depth admits an embedding.
class Infeasible : public Error {
public:
  using Error::Error;
};

/// A truth assignment that does not describe a valid placement.
class InconsistentModel : public Error {
public:
  using Error::Error;
};

/// External solver crashed, produced garbage or a wrong model.
class ExternalSolverError : public Error {
public:
  using Error::Error;
};

} // namespace swapmap
