#pragma once

#include <stdexcept>
#include <string>

namespace hubent {

enum class ErrorKind {
  InvalidSpec,
  InvalidInput,
  InvalidOrder,
  ProbabilityDomain,
  UnsupportedRegime,
  NumericalFailure,
  Convergence,
  Capacity,
};

// Single exception type for the library; `kind()` drives the C status code
// and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hubent
