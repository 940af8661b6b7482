#pragma once

#include "qresum/types.hpp"

namespace qresum {

/// Fixed base q with its derived constants and the numerical policy.
///
/// Immutable after construction; every operation in the library is a pure
/// function of its arguments and a context.
class QContext {
 public:
  /// Throws Errc::OutOfRange unless 0 < q < 1, eps > 0 and max_terms >= 64.
  static QContext make(Real q, Real eps = 1e-12, int max_terms = 10'000);

  Real q() const noexcept { return q_; }
  Real ln_q() const noexcept { return ln_q_; }
  /// exp(2 pi^2 / ln q)
  Real q_hat() const noexcept { return q_hat_; }
  Real ln_q_hat() const noexcept { return ln_q_hat_; }
  /// 1 / sqrt(-2 pi ln q)
  Real c_q() const noexcept { return c_q_; }
  Real eps() const noexcept { return eps_; }
  int max_terms() const noexcept { return max_terms_; }
  /// (q;q)_inf, cached.
  Real qq_inf() const noexcept { return qq_inf_; }

 private:
  QContext() = default;

  Real q_ = 0.5;
  Real ln_q_ = 0.0;
  Real q_hat_ = 0.0;
  Real ln_q_hat_ = 0.0;
  Real c_q_ = 0.0;
  Real eps_ = 1e-12;
  int max_terms_ = 10'000;
  Real qq_inf_ = 0.0;
};

}  // namespace qresum
