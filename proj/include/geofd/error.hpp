#pragma once

#include <stdexcept>
#include <string>

namespace geofd {

// Malformed input files (radio maps, databases, configs).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value or structure violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A position outside the area covered by a radio map.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Argument outside a mathematical domain (non-positive distance, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a precondition of an operation.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Not enough frequency resources for the requested schedule.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// User placement could not satisfy spacing/exclusion constraints.
class PackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geofd
