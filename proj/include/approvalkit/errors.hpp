#pragma once

#include <stdexcept>
#include <string>

namespace approvalkit {

// Malformed input: unknown candidates, bad k, bad tie-break, parse failures.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rule applied outside its domain (SAV with an empty ballot).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An enumeration guard was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace approvalkit
