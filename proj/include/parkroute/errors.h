#pragma once

#include <stdexcept>
#include <string>

namespace parkroute {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Matrix or vector sizes do not agree with the customer count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value is out of its domain (negative time, nonzero diagonal, ...).
class InvalidValueError : public Error {
 public:
  using Error::Error;
};

// The instance (or a requested sub-problem) admits no feasible solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The requested option or size is outside what an algorithm supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A configured resource limit (catalog size, subset count) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace parkroute
