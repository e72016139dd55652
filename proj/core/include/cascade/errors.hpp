#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Bad physics or grid input (non-positive width, efficiency out of range, ...).
class invalid_parameter : public std::invalid_argument {
 public:
  explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Quadrature or integration failed to converge within the refinement budget.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Two objects built on incompatible grids were combined.
class grid_mismatch : public std::logic_error {
 public:
  explicit grid_mismatch(const std::string& what) : std::logic_error(what) {}
};

/// Cross-checks between two routes to the same quantity disagreed.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cascade
