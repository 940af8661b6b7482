#pragma once

// Basic hypergeometric series r phi s, bilateral r psi s, the 2phi0
// coefficient stream, the q-Borel transform, Stieltjes-Wigert polynomials and
// Psi_q.

#include <optional>
#include <vector>

#include "qresum/context.hpp"
#include "qresum/types.hpp"

namespace qresum {

struct PhiParams {
  std::vector<Complex> upper;  // a_1..a_r
  std::vector<Complex> lower;  // b_1..b_s
};

/// Sum of coeffs[n] t^n.
struct FormalSeries {
  std::vector<Complex> coeffs;
  /// Set when the requested length was cut short to avoid overflow.
  bool clamped = false;

  Complex eval(Complex t) const;
};

/// m when a equals q^{-m} (0 <= m <= 60) to within 1e-12, else nothing.
std::optional<int> negative_q_power(Complex a, const QContext& ctx);

/// r phi s with the ((-1)^n q^{C(n,2)})^{1+s-r} normalisation.
/// Throws DivergentSeries outside the convergence region (r > s+1 and not
/// terminating, or r = s+1 with |z| >= 1), PoleAtParameter for b_j = q^{-m}.
Complex phi(const PhiParams& params, Complex z, const QContext& ctx);

/// Bilateral r psi s. Requires r <= s, |b_1..b_s / (a_1..a_r z)| < 1 and, when
/// r = s, |z| < 1; PoleAtParameter for a_j = q^{m+1} or b_j = q^{-m}.
Complex psi(const PhiParams& params, Complex z, const QContext& ctx);

/// Coefficients (a;q)_n (b;q)_n / (q;q)_n (-1)^n q^{-n(n-1)/2}, n = 0..N.
/// N is capped at 200 and further where the coefficients would overflow.
FormalSeries phi20_coeffs(Complex a, Complex b, int N, const QContext& ctx);

/// coeffs[n] -> coeffs[n] q^{n(n-1)/2}.
FormalSeries qborel(const FormalSeries& s, const QContext& ctx);

/// S_n(x;q) = 1/(q;q)_n 1phi1(q^{-n};0;q,-x q^{n+1}).
Complex stieltjes_wigert(int n, Complex x, const QContext& ctx);
inline Real stieltjes_wigert(int n, Real x, const QContext& ctx) {
  return stieltjes_wigert(n, Complex(x), ctx).real();
}

/// Psi_q(a) = sum_{l>=0} a q^l / (1 - a q^l).
Complex psi_q(Complex a, const QContext& ctx);

}  // namespace qresum
