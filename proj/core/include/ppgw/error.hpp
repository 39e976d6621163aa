#pragma once

#include <stdexcept>
#include <string>

namespace ppgw {

// Parameter or argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or series computation hit its hard cap before converging.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two routes that must agree did not (e.g. classification vs root bracket).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A quantity could not be evaluated in double precision (underflowing class).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (frequency CSV, observation lists, table CSV).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ppgw
