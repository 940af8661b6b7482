#include "qresum/stokes.hpp"

#include <cmath>
#include <limits>

#include "qresum/detail/summation.hpp"
#include "qresum/detail/trig.hpp"
#include "qresum/qcore.hpp"
#include "qresum/quad.hpp"

namespace qresum {

namespace {

constexpr Real kRemovableRadius = 1e-4;

Real series_tol(const QContext& ctx) { return ctx.eps() * 1e-4; }

// Relative distance from w to the nearest q^n and that n.
Real lattice_gap(Complex w, const QContext& ctx, int* n_out = nullptr) {
  if (std::abs(w) == 0.0) return std::numeric_limits<Real>::infinity();
  const Real n = std::round(std::log(std::abs(w)) / ctx.ln_q());
  const Real qn = std::exp(n * ctx.ln_q());
  if (n_out) *n_out = static_cast<int>(n);
  return std::abs(w - qn) / qn;
}

// sum_{n>=1} term(n) with the shared stopping rule.
template <typename Term>
Complex positive_sum(Term&& term, const QContext& ctx) {
  return detail::unilateral_sum([&](int k) { return term(k + 1); }, series_tol(ctx), ctx.max_terms()).value;
}

// log( qhat^{n^2} / sinh(n ln qhat) ) up to the sign -1.
Real log_weight(int n, const QContext& ctx) {
  const Real l = ctx.ln_q_hat();
  return std::log(2.0) + n * n * l + n * l - std::log1p(-std::exp(2.0 * n * l));
}

}  // namespace

Complex pqc(const BranchedComplex& z, const QContext& ctx, PqcMethod method) {
  const Real lq = ctx.ln_q();
  const Complex zeta = z.log() / lq;
  if (method == PqcMethod::Series) {
    auto term = [&](int n) {
      const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
      // qhat^{n^2} / sinh(n ln qhat) = -exp(log_weight).
      return -sign * std::exp(log_weight(n, ctx) - detail::log_inv_sin(2.0 * kPi * n * zeta));
    };
    return -2.0 * kPi / lq * positive_sum(term, ctx);
  }
  if (std::abs(z.arg()) >= kPi) {
    throw Error(Errc::ConstraintViolation, "integral form of P^(c) needs |arg z| < pi");
  }
  const Complex zv = z.value();
  auto f = [&](Real u) {
    const Real t = std::exp(u);
    return p_q(BranchedComplex::positive(t), ctx) * theta_q_logderiv(t / zv, ctx);
  };
  return zeta + gauss_legendre(f, lq, 0.0, 8) / lq;
}

Complex pqd(const BranchedComplex& z, Complex lambda, const QContext& ctx) {
  if (lattice_gap(-lambda, ctx) < 1e-8) throw Error(Errc::PoleAtParameter, "lambda on -q^Z");
  if (lattice_gap(-lambda / z.value(), ctx) < 1e-8) throw Error(Errc::PoleAtParameter, "lambda/z on -q^Z");
  const BranchedComplex lb = BranchedComplex::principal(lambda);
  // The -ln tau / ln q parts cancel against ln z / ln q.
  return theta_q_logderiv_periodic(lb, ctx) - theta_q_logderiv_periodic(lb / z, ctx);
}

Complex pqd_difference_closed_form(Complex z, Complex l1, Complex l2, const QContext& ctx) {
  const Real qq3 = std::pow(ctx.qq_inf(), 3);
  return qq3 * theta_q(-z, ctx) * theta_q(-l1 / l2, ctx) * theta_q(-l1 * l2 / z, ctx) /
         (theta_q(l1, ctx) * theta_q(l2, ctx) * theta_q(l1 / z, ctx) * theta_q(z / l2, ctx));
}

Complex removable_limit(StokesFn which, int m, const QContext& ctx, Complex lambda, LimitForm form) {
  const Real q = ctx.q(), lq = ctx.ln_q();
  const Real qq3 = std::pow(ctx.qq_inf(), 3);
  const Real pref = std::pow(q, detail::binom2(m)) / qq3;
  if (which == StokesFn::C) {
    auto term = [&](int n) {
      const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
      return Complex(-sign * n * std::exp(log_weight(n, ctx)));
    };
    const Real sign_m = (m % 2 == 0) ? 1.0 : -1.0;
    return sign_m * pref * std::pow(2.0 * kPi / lq, 2) * positive_sum(term, ctx);
  }
  if (lattice_gap(-lambda, ctx) < 1e-8) throw Error(Errc::PoleAtParameter, "lambda on -q^Z");
  Complex s;
  if (form == LimitForm::Sum) {
    auto term = [&](int n) {
      const Complex x = lambda * std::exp(n * lq);
      return x / ((1.0 + x) * (1.0 + x));
    };
    s = detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  } else {
    s = lambda * theta_q_logderiv_prime(lambda, ctx);
  }
  const Real sign_m1 = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
  return sign_m1 * pref * (1.0 / lq + s);
}

Complex stokes_ratio(StokesFn which, const BranchedComplex& z, const QContext& ctx, Complex lambda) {
  int m = 0;
  if (lattice_gap(z.value(), ctx, &m) < kRemovableRadius) return removable_limit(which, m, ctx, lambda);
  const Complex p = which == StokesFn::C ? pqc(z, ctx) : pqd(z, lambda, ctx);
  return p / theta_q(-z.value(), ctx);
}

StokesJump stokes_monodromy(StokesFn which, const BranchedComplex& z, const QContext& ctx, Complex lambda) {
  const BranchedComplex up = z.rotated(2.0 * kPi);
  if (which == StokesFn::C) {
    return {pqc(up, ctx) - pqc(z, ctx), -2.0 * kPi * kI / ctx.ln_q() * (p_q(z.rotated(kPi), ctx) - 1.0)};
  }
  return {pqd(up, lambda, ctx) - pqd(z, lambda, ctx), 2.0 * kPi * kI / ctx.ln_q()};
}

void check_growth(const LogEntireFn& log_S, const QContext& ctx, Real c) {
  if (!(c > 0.0 && c < 1.0)) throw Error(Errc::OutOfRange, "growth constant must lie in (0, 1)");
  constexpr int kRays = 8;
  auto ratio_at = [&](Real r) {
    Real best = -std::numeric_limits<Real>::infinity();
    for (int j = 0; j < kRays; ++j) {
      const Real v = log_S(std::polar(r, 2.0 * kPi * j / kRays + 0.1)).real();
      if (std::isnan(v) || v == std::numeric_limits<Real>::infinity()) {
        throw Error(Errc::GrowthViolation, "S is not finite on the growth grid");
      }
      best = std::max(best, v);
    }
    return best - log_qpoch_inf(-c * r, ctx).real();
  };
  const Real mid = ratio_at(1e3);
  const Real outer = ratio_at(1e6);
  if (outer > mid + std::log(1.5) && outer > -690.0) {
    throw Error(Errc::GrowthViolation, "S grows faster than (-c|t|;q)_inf");
  }
}

Complex cauchy_heine_reconstruct(const LogEntireFn& log_S, const BranchedComplex& z, const QContext& ctx,
                                 const TransformKind& kind) {
  check_growth(log_S, ctx);
  const Complex zv = z.value();
  const Real lq = ctx.ln_q();
  if (kind.discrete()) {
    const Complex lambda = kind.lambda();
    check_lattice(lambda, zv, ctx);
    auto term = [&](int n) {
      const Complex t = lambda * std::exp(n * lq);
      return std::exp(log_S(-t) - log_theta_q(t, ctx) + std::log(t / (t + zv)));
    };
    return detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  }
  if (std::abs(z.arg()) >= kPi) throw Error(Errc::ConstraintViolation, "Cauchy-Heine integral needs |arg z| < pi");
  const KernelKind k = kind.kernel();
  auto g = [&](Complex t) {
    const Real r = std::abs(t);
    const Complex body = log_S(-r) + std::log(r / (r + zv));
    if (k == KernelKind::E) return body + std::log(ctx.c_q()) + log_e_q(BranchedComplex::positive(r), ctx);
    return body - std::log(-lq) - log_theta_q(r, ctx);
  };
  return integrate_ray(g, 0.0, 0.0, QuadratureSpec{}, ctx).value;
}

}  // namespace qresum
