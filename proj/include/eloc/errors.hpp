#pragma once

#include <stdexcept>
#include <string>

namespace eloc {

// Bad parameters or configuration values. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was driven out of order, or saw a state its contract excludes.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A query outside the domain of the queried object (e.g. time past a trace).
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace eloc
