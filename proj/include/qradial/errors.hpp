#pragma once

#include <stdexcept>
#include <string>

namespace qradial {

// Numeric failure (non-convergence, root isolation breakdown, ...); CLI maps it to exit 1.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Overlap matrix too ill-conditioned at the requested basis size.
struct ConditioningError : NumericError {
  explicit ConditioningError(const std::string& what) : NumericError(what) {}
};

// Eigenvalue curves could not be tracked across a finite-difference window.
struct LevelCrossingError : NumericError {
  explicit LevelCrossingError(const std::string& what) : NumericError(what) {}
};

}  // namespace qradial
