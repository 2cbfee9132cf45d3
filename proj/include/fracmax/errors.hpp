#pragma once

#include <stdexcept>
#include <string>

namespace fracmax {

// Argument outside the mathematical domain of a function (t <= 0, order outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke an operation's precondition (mismatched meshes, singular kernel where a
// regular one is required, sign hypotheses, out-of-range indices).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iteration failed to converge or a factorization broke down.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracmax
