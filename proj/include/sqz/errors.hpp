#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Condenser field is disconnected, plates touch, or the requested topology
// does not match the rasterized one.
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A geometric feature is thinner than one grid cell at the requested
// resolution. Carries the smallest resolution expected to resolve it.
struct RefinementError : std::runtime_error {
  int suggested_resolution;
  RefinementError(const std::string& what, int suggested)
      : std::runtime_error(what + " (suggested minimum resolution: " +
                           std::to_string(suggested) + ")"),
        suggested_resolution(suggested) {}
};

// Iterative solver failed to reach the requested residual.
struct SolverError : std::runtime_error {
  double final_residual;
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (final relative residual " +
                           std::to_string(residual) + ")"),
        final_residual(residual) {}
};

// A partition candidate violates the admissibility constraints of the
// module problem (wrong separation, transversal barrier crossing, ...).
struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sqz
