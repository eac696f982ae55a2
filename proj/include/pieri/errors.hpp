#pragma once

#include <stdexcept>
#include <string>

namespace pieri {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Bad problem data: malformed partitions, shapes, plane files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Some row of the skew chart has its leading one right of its last free cell.
class IncompatibleConditions : public Error {
 public:
  using Error::Error;
};

/// Full codimension but the two conditions are not complementary.
class EmptyProblem : public Error {
 public:
  using Error::Error;
};

class PathCollision : public Error {
 public:
  using Error::Error;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

class MatchAmbiguity : public Error {
 public:
  using Error::Error;
};

class NotBijective : public Error {
 public:
  using Error::Error;
};

/// Tracking along a monodromy leg failed after every retry.
class TrackingFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace pieri
