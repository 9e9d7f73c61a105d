#pragma once

#include <stdexcept>
#include <string>

namespace acf {

// Operand shapes disagree (variable count, degree, truncation, vector length).
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition or instance invariant does not hold.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The available truncation order is too small for the requested computation.
class TruncationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A one-form expected to be closed has a nonzero exterior derivative.
class NotClosedError : public std::domain_error {
 public:
  NotClosedError(unsigned degree, const std::string& what)
      : std::domain_error(what), degree_(degree) {}
  unsigned degree() const noexcept { return degree_; }

 private:
  unsigned degree_;
};

}  // namespace acf
