#pragma once

// Summation helpers shared by the series, lattice and quadrature engines.

#include <cmath>
#include <limits>

#include "qresum/context.hpp"
#include "qresum/types.hpp"

namespace qresum::detail {

/// Neumaier-compensated complex accumulator; summation order is the call order.
class Accumulator {
 public:
  void add(Complex x) {
    add_part(sum_re_, comp_re_, x.real());
    add_part(sum_im_, comp_im_, x.imag());
  }
  Complex value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double sum_re_ = 0.0, comp_re_ = 0.0;
  double sum_im_ = 0.0, comp_im_ = 0.0;
};

struct BilateralResult {
  Complex value;
  int terms = 0;
  Real max_term = 0.0;
};

/// Sums term(n) over n in Z, walking up from 0 and down from -1.
///
/// A direction stops after `run` consecutive terms below tol * (largest term
/// seen so far); terms near the peak are not monotone, hence the run length.
template <typename Term>
BilateralResult bilateral_sum(Term&& term, Real tol, int max_terms, int run = 5) {
  Accumulator up, down;
  Real max_term = 0.0;
  int used = 0;

  auto walk = [&](Accumulator& acc, int start, int step) {
    int small = 0;
    for (int k = 0, n = start; k < max_terms; ++k, n += step) {
      const Complex t = term(n);
      const Real mag = std::abs(t);
      if (!std::isfinite(mag)) {
        throw Error(Errc::TruncationFailure, "non-finite term in bilateral sum at n=" + std::to_string(n));
      }
      acc.add(t);
      ++used;
      max_term = std::max(max_term, mag);
      if (mag <= tol * max_term) {
        if (++small >= run) return;
      } else {
        small = 0;
      }
    }
    throw Error(Errc::TruncationFailure, "bilateral sum did not settle within max_terms");
  };

  walk(up, 0, 1);
  walk(down, -1, -1);
  return {up.value() + down.value(), used, max_term};
}

/// Sums term(n) for n >= 0 with the same stopping rule as bilateral_sum.
template <typename Term>
BilateralResult unilateral_sum(Term&& term, Real tol, int max_terms, int run = 5) {
  Accumulator acc;
  Real max_term = 0.0;
  int small = 0;
  for (int n = 0; n < max_terms; ++n) {
    const Complex t = term(n);
    const Real mag = std::abs(t);
    if (!std::isfinite(mag)) {
      throw Error(Errc::TruncationFailure, "non-finite term in series at n=" + std::to_string(n));
    }
    acc.add(t);
    max_term = std::max(max_term, mag);
    if (mag <= tol * max_term) {
      if (++small >= run) return {acc.value(), n + 1, max_term};
    } else {
      small = 0;
    }
  }
  throw Error(Errc::TruncationFailure, "series did not settle within max_terms");
}

/// n(n-1)/2 as a real, valid for negative n.
inline Real binom2(Real n) { return 0.5 * n * (n - 1.0); }

}  // namespace qresum::detail
