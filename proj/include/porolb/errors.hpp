#pragma once

#include <stdexcept>
#include <string>

namespace porolb {

/// Invalid configuration: bad keys, out-of-range values, unresolvable setups.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite populations or velocities beyond the stability guard.
struct NumericalInstability : std::runtime_error {
  explicit NumericalInstability(const std::string& msg) : std::runtime_error(msg) {}
};

/// Geometry that cannot be built (no fluid cells, packing failure, ...).
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace porolb
