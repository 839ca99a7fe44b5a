#pragma once

#include <stdexcept>
#include <string>

namespace cars {

// Invalid user-facing configuration: bad scenario files, incompatible grids,
// out-of-range parameters.  Mapped to exit code 2 by the CLI.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: grids too narrow for the requested fields, quadrature
// that cannot cover the support, non-finite intermediate values.  Mapped to
// exit code 3 by the CLI.
class NumericsError : public std::runtime_error {
  public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cars
