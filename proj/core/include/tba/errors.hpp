#pragma once

#include <stdexcept>
#include <string>

namespace tba {

/// Base class for every error raised by the solver. `exit_code()` maps the
/// failure onto the stable process exit codes of the `tba` CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed map, goals, ordering or cache input (syntax level).
class ParseError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Syntactically valid input that breaks a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Free space (or a graph built over it) is not connected.
class DisconnectedError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// A query point lies outside the closure of free space.
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// Degenerate numerics: zero-area triangles, non-finite iterates.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Exact oracle asked for more goals than its memory guard allows.
class CapacityError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace tba
