#pragma once

#include <stdexcept>
#include <string>

namespace tstein {

// Quadrature or inversion non-convergence; maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tstein
