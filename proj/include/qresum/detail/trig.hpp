#pragma once

#include <complex>

#include "qresum/types.hpp"

namespace qresum::detail {

/// log(1 / sin z), stable for large |Im z| (some branch of the log).
inline Complex log_inv_sin(Complex z) {
  const Complex two_i{0.0, 2.0};
  if (z.imag() >= 0.0) {
    return std::log(two_i) + kI * z - std::log(std::exp(2.0 * kI * z) - 1.0);
  }
  return std::log(two_i) - kI * z - std::log(1.0 - std::exp(-2.0 * kI * z));
}

inline Complex inv_sin(Complex z) { return std::exp(log_inv_sin(z)); }

}  // namespace qresum::detail
