#pragma once

#include <stdexcept>
#include <string>

namespace cealg {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic between scalars or polynomials over different prime fields.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// A Dga (or table) that cannot be constructed: duplicate or undeclared
/// generators, generator kind/action contradictions.
class DgaError : public Error {
 public:
  using Error::Error;
};

/// A cochain or augmentation that is nonzero outside its allowed support.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A search whose configured bound would be exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Structural problems in a pearly tree or broken trajectory.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation invoked on inputs that fail its documented preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cealg
