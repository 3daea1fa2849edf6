#pragma once

#include <stdexcept>
#include <string>

namespace kinex {

// Raised when an argument falls outside the domain of a kernel or estimator.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Raised by estimators when the data cannot support the requested fit.
class EstimationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinex
