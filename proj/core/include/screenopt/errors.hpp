#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace screenopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem instance, menu or configuration violates its structural invariants.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

/// An evaluation point lies outside the declared agent, product or price domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied evaluator produced NaN or an infinity.
class NonFiniteResult : public Error {
 public:
  using Error::Error;
};

/// The requested utility cannot be delivered by any price in [z_lower, cap].
class UnattainableUtility : public Error {
 public:
  using Error::Error;
};

/// Utility was found to be non-decreasing in price while inverting it.
class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};

/// Two agents share a product but were assigned different prices.
class InconsistentPrice : public Error {
 public:
  using Error::Error;
};

/// No coordinatewise order relates any pair of agents.
class UnorderedGrid : public Error {
 public:
  using Error::Error;
};

/// The solver refuses an instance that fails a required assumption check.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class NonFiniteProfit : public Error {
 public:
  NonFiniteProfit(const std::string& what, std::size_t item_index)
      : Error(what), item_index_(item_index) {}
  std::size_t item_index() const noexcept { return item_index_; }

 private:
  std::size_t item_index_;
};

/// Brute-force enumeration would exceed its candidate budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace screenopt
