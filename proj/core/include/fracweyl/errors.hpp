#pragma once

#include <stdexcept>
#include <string>

namespace fracweyl {

// Violation of a mathematical admissibility condition (order bounds,
// ellipticity, parameter ranges).  Distinct from plain argument errors so
// callers can map it to a dedicated exit code.
class constraint_error : public std::invalid_argument {
 public:
  explicit constraint_error(const std::string& what) : std::invalid_argument(what) {}
};

// Failure of a numerical procedure (non-convergence, loss of positivity,
// quadrature breakdown).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracweyl
