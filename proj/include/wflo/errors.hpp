#pragma once

#include <stdexcept>
#include <string>

namespace wflo {

// Bad or inconsistent configuration (unknown preset, malformed table, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested problem size exceeds what a method supports.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An encoding cannot hold the requested number of variables.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke an operation precondition (overlapping supports, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wflo
