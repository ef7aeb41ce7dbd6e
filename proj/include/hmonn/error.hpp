#pragma once

#include <stdexcept>
#include <string>

namespace hmonn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV, ARFF, schema sidecar or model stream.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Schema invariant broken, or a named column has the wrong kind / is absent.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A column is entirely missing so no mean or mode exists.
class ImputationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmonn
