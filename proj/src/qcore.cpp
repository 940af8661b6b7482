#include "qresum/qcore.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qresum/detail/summation.hpp"

namespace qresum {

namespace {

constexpr Real kNegInf = -std::numeric_limits<Real>::infinity();

Real series_tol(const QContext& ctx) { return ctx.eps() * 1e-4; }

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::OutOfRange, std::string("non-finite ") + what);
  }
}

// Rescales tau into the annulus q <= |tau'| < 1; tau = q^{-m} tau'.
struct Reduced {
  Complex tau;
  int m;
};

Reduced reduce_annulus(Complex tau, const QContext& ctx) {
  require_finite(tau, "theta argument");
  const Real r = std::abs(tau);
  if (!(r > 0.0)) throw Error(Errc::OutOfRange, "theta_q needs tau != 0");
  int m = static_cast<int>(std::floor(-std::log(r) / ctx.ln_q())) + 1;
  Complex t = tau * std::exp(m * ctx.ln_q());
  // Guard against rounding at the annulus edges.
  if (std::abs(t) >= 1.0) {
    ++m;
    t *= ctx.q();
  } else if (std::abs(t) < ctx.q() * (1.0 - 1e-15)) {
    --m;
    t /= ctx.q();
  }
  return {t, m};
}

void check_logderiv_pole(Complex t, const QContext& ctx) {
  if (std::abs(t + ctx.q()) < 1e-8 * ctx.q() || std::abs(t + 1.0) < 1e-8) {
    throw Error(Errc::PoleAtParameter, "theta_q vanishes at the requested point (tau = -q^n)");
  }
}

// Product form of tau theta'/theta for q <= |t| < 1.
Complex logderiv_annulus(Complex t, const QContext& ctx) {
  detail::Accumulator acc;
  const Real q = ctx.q();
  Real qn = 1.0;  // q^n
  for (int n = 0; n < ctx.max_terms(); ++n) {
    acc.add(t * qn / (1.0 + t * qn));
    if (n >= 1) acc.add(-qn / (t + qn));
    if (qn < 1e-18) return acc.value();
    qn *= q;
  }
  throw Error(Errc::TruncationFailure, "log-derivative product did not settle");
}

Complex logderiv_prime_annulus(Complex t, const QContext& ctx) {
  detail::Accumulator acc;
  const Real q = ctx.q();
  Real qn = 1.0;
  for (int n = 0; n < ctx.max_terms(); ++n) {
    const Complex d0 = 1.0 + t * qn;
    acc.add(qn / (d0 * d0));
    if (n >= 1) {
      const Complex d1 = t + qn;
      acc.add(qn / (d1 * d1));
    }
    if (qn < 1e-18) return acc.value();
    qn *= q;
  }
  throw Error(Errc::TruncationFailure, "log-derivative product did not settle");
}

}  // namespace

Complex log_qpoch_inf(Complex a, const QContext& ctx) {
  require_finite(a, "Pochhammer argument");
  if (a == Complex(0.0)) return 0.0;
  detail::Accumulator acc;
  Complex x = a;
  const Real q = ctx.q();
  for (int n = 0; n < ctx.max_terms(); ++n) {
    if (std::abs(x) < 1e-6) {
      // log(x;q)_inf = -sum_j x^j / (j (1 - q^j))
      Complex xj = x;
      Real qj = q;
      for (int j = 1; j <= 3; ++j) {
        acc.add(-xj / (j * (1.0 - qj)));
        xj *= x;
        qj *= q;
      }
      return acc.value();
    }
    const Complex f = 1.0 - x;
    if (std::abs(f) < 1e-15) return {kNegInf, 0.0};
    acc.add(std::log(f));
    x *= q;
  }
  throw Error(Errc::TruncationFailure, "(a;q)_inf needs more than max_terms factors");
}

Complex qpoch_inf(Complex a, const QContext& ctx) {
  const Complex l = log_qpoch_inf(a, ctx);
  if (l.real() == kNegInf) return 0.0;
  return std::exp(l);
}

Complex qpoch_n(Complex a, int n, const QContext& ctx) {
  require_finite(a, "Pochhammer argument");
  if (n >= 0) {
    Complex p = 1.0;
    Complex x = a;
    for (int k = 0; k < n; ++k, x *= ctx.q()) p *= 1.0 - x;
    return p;
  }
  const Complex den = qpoch_n(a * std::pow(ctx.q(), n), -n, ctx);
  if (std::abs(den) < 1e-300) throw Error(Errc::PoleAtParameter, "(a;q)_n with negative n hits a pole");
  return 1.0 / den;
}

Complex qpoch(Complex a, Complex nu, const QContext& ctx) {
  require_finite(nu, "Pochhammer index");
  const Real r = std::round(nu.real());
  if (nu.imag() == 0.0 && std::abs(nu.real() - r) < 1e-14 && std::abs(r) < 1e6) {
    return qpoch_n(a, static_cast<int>(r), ctx);
  }
  const Complex shift = a * std::exp(nu * ctx.ln_q());
  const Complex den = log_qpoch_inf(shift, ctx);
  if (den.real() == kNegInf) throw Error(Errc::PoleAtParameter, "(a q^nu;q)_inf vanishes");
  const Complex num = log_qpoch_inf(a, ctx);
  if (num.real() == kNegInf) return 0.0;
  return std::exp(num - den);
}

Complex log_theta_q(Complex tau, const QContext& ctx) {
  const Reduced r = reduce_annulus(tau, ctx);
  const Complex inner = log_qpoch_inf(-r.tau, ctx) + log_qpoch_inf(-ctx.q() / r.tau, ctx);
  if (inner.real() == kNegInf) return {kNegInf, 0.0};
  return std::log(ctx.qq_inf()) + inner + static_cast<Real>(r.m) * std::log(r.tau) -
         0.5 * r.m * (r.m + 1.0) * ctx.ln_q();
}

Complex theta_q(Complex tau, const QContext& ctx) {
  const Complex l = log_theta_q(tau, ctx);
  if (l.real() == kNegInf) return 0.0;
  return std::exp(l);
}

Complex theta_q_series(Complex tau, const QContext& ctx) {
  require_finite(tau, "theta argument");
  if (tau == Complex(0.0)) throw Error(Errc::OutOfRange, "theta_q needs tau != 0");
  const Complex lt = std::log(tau);
  auto term = [&](int n) { return std::exp(detail::binom2(n) * ctx.ln_q() + static_cast<Real>(n) * lt); };
  return detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Complex theta_q_logderiv(Complex tau, const QContext& ctx) {
  const Reduced r = reduce_annulus(tau, ctx);
  check_logderiv_pole(r.tau, ctx);
  return static_cast<Real>(r.m) + logderiv_annulus(r.tau, ctx);
}

Complex theta_q_logderiv_series(Complex tau, const QContext& ctx) {
  const Reduced r = reduce_annulus(tau, ctx);
  check_logderiv_pole(r.tau, ctx);
  const Complex lt = std::log(r.tau);
  auto t0 = [&](int n) { return std::exp(detail::binom2(n) * ctx.ln_q() + static_cast<Real>(n) * lt); };
  auto t1 = [&](int n) { return static_cast<Real>(n) * t0(n); };
  const Complex s0 = detail::bilateral_sum(t0, series_tol(ctx), ctx.max_terms()).value;
  const Complex s1 = detail::bilateral_sum(t1, series_tol(ctx), ctx.max_terms()).value;
  return static_cast<Real>(r.m) + s1 / s0;
}

Complex theta_q_logderiv_prime(Complex tau, const QContext& ctx) {
  const Reduced r = reduce_annulus(tau, ctx);
  check_logderiv_pole(r.tau, ctx);
  return std::exp(r.m * ctx.ln_q()) * logderiv_prime_annulus(r.tau, ctx);
}

Complex log_e_q(const BranchedComplex& tau, const QContext& ctx) {
  const Complex l = tau.log() - 0.5 * ctx.ln_q();
  return l * l / (2.0 * ctx.ln_q());
}

Complex e_q(const BranchedComplex& tau, const QContext& ctx) { return std::exp(log_e_q(tau, ctx)); }

Complex p_q_at(Complex t, const QContext& ctx) {
  require_finite(t, "P_q argument");
  const Complex w = 2.0 * kPi * kI * t;
  auto term = [&](int n) {
    const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(static_cast<Real>(n) * n * ctx.ln_q_hat() + static_cast<Real>(n) * w);
  };
  return detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Complex theta_q_logderiv_periodic(const BranchedComplex& tau, const QContext& ctx) {
  const Complex t = tau.log() / ctx.ln_q();
  const Complex w = 2.0 * kPi * kI * t;
  auto term = [&](int n) {
    const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(static_cast<Real>(n) * n * ctx.ln_q_hat() + static_cast<Real>(n) * w);
  };
  auto dterm = [&](int n) { return 2.0 * kPi * kI * static_cast<Real>(n) * term(n); };
  const Complex p = detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  if (std::abs(p) < kThetaPoleFloor) throw Error(Errc::PoleAtParameter, "theta_q vanishes at the requested point");
  const Complex dp = detail::bilateral_sum(dterm, series_tol(ctx), ctx.max_terms()).value;
  return dp / (p * ctx.ln_q());
}

Complex p_q(const BranchedComplex& tau, const QContext& ctx) { return p_q_at(tau.log() / ctx.ln_q(), ctx); }

Complex p_q_product(const BranchedComplex& tau, const QContext& ctx) {
  const Complex lt = log_theta_q(tau.value(), ctx);
  if (lt.real() == kNegInf) return 0.0;
  return -ctx.ln_q() * ctx.c_q() * std::exp(log_e_q(tau, ctx) + lt);
}

Complex p_q_gaussian(Complex t, const QContext& ctx) {
  require_finite(t, "P_q argument");
  const Real shift = std::round(0.5 - t.real());
  auto term = [&](int n) {
    const Complex s = t - 0.5 + (shift + n);
    return std::exp(0.5 * ctx.ln_q() * s * s);
  };
  return -ctx.ln_q() * ctx.c_q() * detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Real p_q_reciprocal_coeff(int n, const QContext& ctx) {
  if (n < 0) throw Error(Errc::InvalidN, "reciprocal coefficient index must be >= 0");
  auto term = [&](int m) {
    const Real sign = (m % 2 == 0) ? 1.0 : -1.0;
    return Complex(sign * std::exp(static_cast<Real>(m) * (m + 2.0 * n + 1.0) * ctx.ln_q_hat()));
  };
  return detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value.real();
}

namespace {

void check_nome(Real nome) {
  if (!(nome > 0.0) || !(nome < 1.0)) throw Error(Errc::OutOfRange, "nome must lie in (0,1)");
}

}  // namespace

Complex jacobi_theta1(Complex u, Real nome, const QContext& ctx) {
  check_nome(nome);
  const Real ln_nome = std::log(nome);
  auto term = [&](int n) {
    const Real sign = (n % 2 == 0) ? 2.0 : -2.0;
    const Real e = (n + 0.5) * (n + 0.5) * ln_nome;
    return sign * std::exp(e) * std::sin((2.0 * n + 1.0) * u);
  };
  return detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Complex jacobi_theta1_prime(Complex u, Real nome, const QContext& ctx) {
  check_nome(nome);
  const Real ln_nome = std::log(nome);
  auto term = [&](int n) {
    const Real sign = (n % 2 == 0) ? 2.0 : -2.0;
    const Real e = (n + 0.5) * (n + 0.5) * ln_nome;
    return sign * (2.0 * n + 1.0) * std::exp(e) * std::cos((2.0 * n + 1.0) * u);
  };
  return detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Complex jacobi_theta4(Complex u, Real nome, const QContext& ctx) {
  check_nome(nome);
  const Real ln_nome = std::log(nome);
  auto term = [&](int n) -> Complex {
    if (n == 0) return 1.0;
    const Real sign = (n % 2 == 0) ? 2.0 : -2.0;
    return sign * std::exp(static_cast<Real>(n) * n * ln_nome) * std::cos(2.0 * n * u);
  };
  return detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
}

Complex jacobi_theta(int kind, Complex u, Real nome, const QContext& ctx) {
  switch (kind) {
    case 1: return jacobi_theta1(u, nome, ctx);
    case 4: return jacobi_theta4(u, nome, ctx);
    default: throw Error(Errc::OutOfRange, "jacobi_theta supports kinds 1 and 4");
  }
}

}  // namespace qresum
