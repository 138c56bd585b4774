#pragma once

#include <stdexcept>
#include <string>

namespace kamnls {

struct KamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameter outside the range an operation is defined on.
struct DomainError : KamError {
  using KamError::KamError;
};

/// Operands disagree on window, weight or coefficient backend.
struct MismatchError : KamError {
  using KamError::KamError;
};

struct BudgetError : KamError {
  using KamError::KamError;
};

struct DivergenceError : KamError {
  using KamError::KamError;
};

struct ConfigError : KamError {
  using KamError::KamError;
};

/// A key that passed the truncation filter has a divisor below gamma*lambda_s.
struct ResonanceError : KamError {
  ResonanceError(const std::string& what, std::string key_text, double divisor, double floor)
      : KamError(what), key(std::move(key_text)), divisor(divisor), floor(floor) {}
  std::string key;
  double divisor;
  double floor;
};

/// Post-step norms exceeded their targets.
struct ContractFailure : KamError {
  using KamError::KamError;
};

}  // namespace kamnls
