#pragma once

#include <stdexcept>
#include <string>

namespace v2v {

// Root of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: the instance or a call's preconditions are violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CurveError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ExoRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IllegalStrategyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ModelMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ModeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A conditional probability was requested on a zero-probability event.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// The solver reached a state that the model's structure rules out.
class SolverError : public Error {
 public:
  using Error::Error;
};

class ExhaustivenessError : public SolverError {
 public:
  using SolverError::SolverError;
};

class BracketError : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

class AssertionError : public SolverError {
 public:
  using SolverError::SolverError;
};

class StatisticalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace v2v
