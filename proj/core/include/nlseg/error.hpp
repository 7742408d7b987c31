#pragma once

#include <stdexcept>
#include <string>

namespace nlseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument or shape precondition violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed input file or config.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Numerical consistency check failed (e.g. spectral solve residue).
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace nlseg
