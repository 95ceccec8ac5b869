#pragma once

#include <stdexcept>
#include <string>

namespace homog3 {

// Validation failures (bad arguments, malformed input) use std::invalid_argument.
// numerical_error marks failures of the numerics themselves: non-convergence,
// degenerate geometry, quadrature that refuses to settle.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace homog3
