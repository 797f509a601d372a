#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace slabeb {

/// Invalid model/slab configuration (bad parameter, unparsable spec string).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Numerical routine failed to reach its target accuracy.
struct NumericalError : std::runtime_error {
  double achieved_error;
  explicit NumericalError(const std::string& what,
                          double achieved = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), achieved_error(achieved) {}
};

}  // namespace slabeb
