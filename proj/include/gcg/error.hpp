#pragma once

#include <stdexcept>
#include <string>

namespace gcg {

// Base for every library error. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// An input object does not satisfy the invariants of the type it is being
// turned into (non-isotropic basis, J^2 != -1, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic cannot proceed: division by zero, singular matrix,
// missing square root.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

}  // namespace gcg
