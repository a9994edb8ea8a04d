#ifndef BUDGET_FAIR_ERRORS_HPP
#define BUDGET_FAIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace budget_fair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates an instance or allocation invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bundles overlap or leave items unassigned.
class PartitionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Search or enumeration budget exhausted.
class LimitError : public Error {
 public:
  using Error::Error;
};

// A construction hit a case where it cannot produce an improvement.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace budget_fair

#endif  // BUDGET_FAIR_ERRORS_HPP
