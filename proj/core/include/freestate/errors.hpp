#pragma once

#include <stdexcept>
#include <string>

namespace freestate {

// Malformed text input (word tokens, config values).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where an operation is defined
// (point not in D_n, lambda off the open annulus, non-PSD matrix, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a structural precondition: rank mismatch, prefix too short,
// size cap exceeded.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An iterative solver failed to meet its residual contract.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace freestate
