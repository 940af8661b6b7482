#include "qresum/context.hpp"

#include <cmath>
#include <string>

namespace qresum {

QContext QContext::make(Real q, Real eps, int max_terms) {
  if (!std::isfinite(q) || !(q > 0.0) || !(q < 1.0)) {
    throw Error(Errc::OutOfRange, "q must satisfy 0 < q < 1, got " + std::to_string(q));
  }
  if (!std::isfinite(eps) || !(eps > 0.0)) {
    throw Error(Errc::OutOfRange, "eps must be positive and finite");
  }
  if (max_terms < 64) {
    throw Error(Errc::OutOfRange, "max_terms must be at least 64");
  }
  QContext ctx;
  ctx.q_ = q;
  ctx.ln_q_ = std::log(q);
  ctx.ln_q_hat_ = 2.0 * kPi * kPi / ctx.ln_q_;
  ctx.q_hat_ = std::exp(ctx.ln_q_hat_);
  ctx.c_q_ = 1.0 / std::sqrt(-2.0 * kPi * ctx.ln_q_);
  ctx.eps_ = eps;
  ctx.max_terms_ = max_terms;

  Real log_prod = 0.0;
  Real qn = q;
  int n = 1;
  for (; qn > 1e-18 && n < max_terms; ++n, qn *= q) log_prod += std::log1p(-qn);
  if (qn > 1e-18) throw Error(Errc::TruncationFailure, "(q;q)_inf needs more than max_terms factors");
  ctx.qq_inf_ = std::exp(log_prod);
  return ctx;
}

}  // namespace qresum
