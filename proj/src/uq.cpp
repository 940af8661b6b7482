#include "qresum/uq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qresum/detail/summation.hpp"
#include "qresum/detail/trig.hpp"
#include "qresum/qcore.hpp"
#include "qresum/series.hpp"

namespace qresum {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

Real series_tol(const QContext& ctx) { return ctx.eps() * 1e-4; }

Complex log_qp(Complex x, const QContext& ctx) { return log_qpoch_inf(x, ctx); }
Complex qpow(Complex s, const QContext& ctx) { return std::exp(s * ctx.ln_q()); }

bool terminating(Complex a, const QContext& ctx) { return negative_q_power(a, ctx).has_value(); }

Complex log_phi21_zero(Complex a, Complex b, Complex x, const QContext& ctx) {
  if (terminating(a, ctx) || terminating(b, ctx) || std::abs(x) < 0.5) {
    return std::log(phi({{a, b}, {0.0}}, x, ctx));
  }
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  if (!(std::abs(b) < 1.0)) {
    throw Error(Errc::ConstraintViolation, "continuation of 2phi1(a,b;0;x) needs min(|a|,|b|) < 1");
  }
  // Heine: 2phi1(a,b;0;x) = (b, ax)_inf / (x)_inf 2phi1(0, x; ax; q, b).
  const Complex s = phi({{0.0, x}, {a * x}}, b, ctx);
  return log_qp(b, ctx) + log_qp(a * x, ctx) - log_qp(x, ctx) + std::log(s);
}

// log u(t), u(t) = (-a q t)_inf 1phi1(q/b; -aqt; q, -bqt) with |a| >= |b|.
Complex log_u(Complex a, Complex b, Complex t, const QContext& ctx) {
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  const Real q = ctx.q();
  Complex d = 1.0;
  Real qn = q;
  auto term = [&](int n) {
    if (n == 0) return Complex(1.0);
    d *= (b - qn) * qn * t / ((1.0 + a * qn * t) * (1.0 - qn));
    qn *= q;
    return d;
  };
  const auto s = detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms());
  return log_qp(-a * q * t, ctx) + std::log(s.value);
}

LogFn borel_integrand(UqMethod m, Complex a, Complex b, Complex zv, const QContext& ctx) {
  const Real q = ctx.q();
  switch (m) {
    case UqMethod::Borel:
      return [a, b, &ctx](Complex t) { return log_phi21_zero(a, b, -t, ctx); };
    case UqMethod::Phi11:
      return [a, b, &ctx](Complex t) {
        return log_qp(-b * t, ctx) - log_qp(-t, ctx) + std::log(phi({{b}, {-b * t}}, -a * t, ctx));
      };
    case UqMethod::Poch: {
      const Complex la = log_qp(a, ctx);
      return [a, b, q, zv, la, &ctx](Complex t) {
        return la + log_qp(-b * t, ctx) + log_qp(-a * q * zv / t, ctx) - log_qp(-t, ctx);
      };
    }
    case UqMethod::Symmetric: {
      const Complex lc = log_qp(a * b * zv, ctx);
      return [a, b, lc, &ctx](Complex t) { return lc + log_qp(-a * t, ctx) + log_qp(-b * t, ctx) - log_qp(-t, ctx); };
    }
    default:
      throw Error(Errc::ConstraintViolation, "not a Borel-plane representation");
  }
}

ContourSpec mb_contour(Complex a, Complex b, const QContext& ctx) {
  auto ratio = [&](Complex x) { return std::abs(x) == 0.0 ? kInf : std::log(std::abs(x)) / ctx.ln_q(); };
  ContourSpec spec;
  spec.left = -std::min({1.0, ratio(a), ratio(b)});
  spec.right = 0.0;
  spec.sigma = 0.5 * spec.left;
  return spec;
}

Complex uq_mellin_barnes(const UqPoint& p, const QContext& ctx) {
  const Complex a = p.a, b = p.b;
  const Real lq = ctx.ln_q();
  const ContourSpec spec = mb_contour(a, b, ctx);
  const Complex K = k0(a, b, ctx);
  const Complex lz = p.z.log();
  const Complex log_pi = std::log(kPi);
  auto common = [&](Complex s) {
    return log_qp(qpow(1.0 + s, ctx), ctx) - log_qp(a * qpow(s, ctx), ctx) - log_qp(b * qpow(s, ctx), ctx);
  };
  switch (p.kind.tag()) {
    case TransformKind::Tag::E: {
      auto F = [&](Complex s) {
        return log_pi + common(s) - 0.5 * s * (s - 1.0) * lq + s * lz + detail::log_inv_sin(kPi * s);
      };
      return -K / (2.0 * kPi * kI) * mb_line_integral(F, spec, ctx).value;
    }
    case TransformKind::Tag::Theta: {
      if (std::abs(p.z.arg()) >= 2.0 * kPi) {
        throw Error(Errc::ConstraintViolation, "theta resummation needs |arg z| < 2 pi");
      }
      auto F = [&](Complex s) {
        return 2.0 * log_pi + common(s) + log_theta_q(-qpow(1.0 - s, ctx), ctx) + s * lz +
               2.0 * detail::log_inv_sin(kPi * s);
      };
      const Real qq3 = std::pow(ctx.qq_inf(), 3);
      return K / (2.0 * kPi * kI * qq3 * lq) * mb_line_integral(F, spec, ctx).value;
    }
    case TransformKind::Tag::Discrete: {
      const Complex lambda = p.kind.lambda();
      const Complex zv = p.z.value();
      check_lattice(lambda, zv, ctx);
      const Complex llam = std::log(lambda);
      const Complex lt0 = log_theta_q(lambda / zv, ctx);
      auto F = [&](Complex s) {
        return log_pi + common(s) + s * llam + log_theta_q(lambda * qpow(s, ctx) / zv, ctx) - lt0 +
               detail::log_inv_sin(kPi * s);
      };
      return -K / (2.0 * kPi * kI) * mb_line_integral(F, spec, ctx).value;
    }
  }
  return 0.0;
}

Complex uq_cauchy_heine(const UqPoint& p, const QContext& ctx) {
  const Complex a = p.a, b = p.b;
  const Complex zv = p.z.value();
  const Complex K = k0(a, b, ctx);
  const Real q = ctx.q();
  if (p.kind.discrete()) {
    const Complex lambda = p.kind.lambda();
    check_lattice(lambda, zv, ctx);
    auto term = [&](int n) {
      const Complex t = lambda * std::exp(n * ctx.ln_q());
      return std::exp(log_u(a, b, t, ctx) - log_theta_q(q * t, ctx) + std::log(t / (t + zv)));
    };
    return K * detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  }
  if (std::abs(p.z.arg()) >= kPi) {
    throw Error(Errc::ConstraintViolation, "the Cauchy-Heine form needs |arg z| < pi");
  }
  const KernelKind k = p.kind.kernel();
  auto g = [&](Complex t) {
    const Real r = std::abs(t);
    return log_u(a, b, r, ctx) + std::log(r / (r + zv)) + log_kernel(k, BranchedComplex::positive(q * r), ctx);
  };
  return K * integrate_ray(g, 0.0, -0.5 * ctx.ln_q(), QuadratureSpec{}, ctx).value;
}

Complex kappa_at(KernelKind k, const BranchedComplex& w, const QContext& ctx) { return kernel(k, w, ctx); }

// -w on the sheet w e^{i pi}.
BranchedComplex negate(const BranchedComplex& w) { return w.rotated(kPi); }

KernelKind kappa_for(const TransformKind& kind, KernelKind fallback) {
  return kind.discrete() ? fallback : kind.kernel();
}

Complex solution_value(Solution s, const TransformKind& kind, Complex a, Complex b, const BranchedComplex& w,
                       const QContext& ctx, KernelKind kappa) {
  switch (s) {
    case Solution::U:
      return uq(UqPoint{a, b, w, kind}, ctx);
    case Solution::Y2:
      return y2(kappa_for(kind, kappa), a, b, w, ctx);
    case Solution::Y3:
      return y_infinity(3, a, b, w, ctx);
    case Solution::Y4:
      return y_infinity(4, a, b, w, ctx);
  }
  return 0.0;
}

Residual combine(std::initializer_list<Complex> terms) {
  detail::Accumulator acc;
  Real scale = 0.0;
  for (Complex t : terms) {
    acc.add(t);
    scale = std::max(scale, std::abs(t));
  }
  return {acc.value(), scale};
}

// Multiplier forms in terms of ln a.
Complex pk_from_log(PkForm form, Complex la, const BranchedComplex& z, const QContext& ctx, Complex lambda) {
  const Real lq = ctx.ln_q();
  const Real qh = ctx.q_hat();
  const Real lqh = ctx.ln_q_hat();
  const Complex a = std::exp(la);
  const Complex lz = z.log();
  const Complex alpha = la / lq;
  const Complex zeta = lz / lq;
  const Real qq3 = std::pow(ctx.qq_inf(), 3);
  const Real q18 = std::pow(ctx.q(), 0.125);
  const Real root = std::sqrt(-2.0 * std::pow(kPi, 3) / std::pow(lq, 3));
  auto shared_sum = [&]() {
    auto term = [&](int n) {
      const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
      return sign * std::exp(Real(n) * Real(n) * lqh - 2.0 * n * kPi * kI * (alpha + zeta) +
                             detail::log_inv_sin(kPi * alpha + kI * (n * lqh)));
    };
    return detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  };
  switch (form) {
    case PkForm::Lambda: {
      const BranchedComplex lb = BranchedComplex::principal(lambda);
      const BranchedComplex ab = BranchedComplex::from_log(la);
      return p_q(ab * lb, ctx) * p_q(lb / (ab * z), ctx) / (p_q(lb, ctx) * p_q(lb / z, ctx));
    }
    case PkForm::E:
      return root / (q18 * qq3) * jacobi_theta1(kPi * alpha, qh, ctx) * shared_sum();
    case PkForm::E2: {
      const Complex ea = e_q(BranchedComplex::from_log(la), ctx);
      return -kPi * ea * theta_q(-a, ctx) / (qq3 * q18 * lq) * shared_sum();
    }
    case PkForm::Theta1: {
      const Complex u1 = kPi * alpha, u2 = kPi * (alpha + zeta), u3 = kPi * zeta;
      const Complex t1 = jacobi_theta1(u1, qh, ctx), t2 = jacobi_theta1(u2, qh, ctx);
      const Complex t3 = jacobi_theta1(u3, qh, ctx);
      if (std::abs(t3) < 1e-250 || std::abs(t1) < 1e-250 || std::abs(t2) < 1e-250) {
        throw Error(Errc::PoleAtParameter, "theta_1 zero in the theta-kind multiplier");
      }
      const Complex d = jacobi_theta1_prime(u1, qh, ctx) / t1 - jacobi_theta1_prime(u2, qh, ctx) / t2;
      return root * t1 * t2 / (q18 * qq3 * t3) * d;
    }
    case PkForm::Theta2: {
      auto term = [&](int n) {
        return std::exp(-2.0 * kPi * kI * Real(n) * zeta + 2.0 * detail::log_inv_sin(kPi * alpha + kI * (n * lqh)));
      };
      const Complex s = detail::bilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
      const Complex th = theta_q(-a, ctx);
      return kPi * kPi * th * th * std::exp(la * la / lq) / (a * qq3 * qq3 * lq * lq) * s;
    }
    case PkForm::Theta3: {
      const Complex bracket =
          (lz / lq - theta_q_logderiv(-a, ctx) + theta_q_logderiv(-a * z.value(), ctx)) / a;
      return std::exp(la * (la + lz) / lq) * theta_q(-a * z.value(), ctx) * theta_q(-a, ctx) /
             (theta_q(-z.value(), ctx) * qq3) * bracket;
    }
  }
  return 0.0;
}

PkForm default_form(const TransformKind& kind) {
  switch (kind.tag()) {
    case TransformKind::Tag::E:
      return PkForm::E;
    case TransformKind::Tag::Theta:
      return PkForm::Theta1;
    default:
      return PkForm::Lambda;
  }
}

Complex pk_kind_log(const TransformKind& kind, Complex la, const BranchedComplex& z, const QContext& ctx) {
  return pk_from_log(default_form(kind), la, z, ctx, kind.discrete() ? kind.lambda() : Complex(1.0));
}

void require_bound_zone_ok(int N, Real c, const TransformKind& kind, BoundZone zone, const QContext& ctx) {
  if (N <= 0) throw Error(Errc::InvalidN, "remainder bound needs N >= 1");
  const bool discrete_half = kind.discrete() && zone == BoundZone::HalfPlane;
  if (!discrete_half && c > 0.0 && !(N > 1.0 - std::log(c) / ctx.ln_q())) {
    throw Error(Errc::InvalidN, "remainder bound needs N > 1 - ln c / ln q");
  }
}

}  // namespace

const char* to_string(UqMethod m) {
  switch (m) {
    case UqMethod::Borel:
      return "borel";
    case UqMethod::Phi11:
      return "phi11";
    case UqMethod::Poch:
      return "poch";
    case UqMethod::Symmetric:
      return "symmetric";
    case UqMethod::CauchyHeine:
      return "cauchy_heine";
    case UqMethod::MellinBarnes:
      return "mellin_barnes";
  }
  return "?";
}

UqMethod uq_method_from_string(const std::string& name) {
  for (UqMethod m : all_uq_methods()) {
    if (name == to_string(m)) return m;
  }
  throw Error(Errc::ConstraintViolation, "unknown method '" + name + "'");
}

const std::vector<UqMethod>& all_uq_methods() {
  static const std::vector<UqMethod> methods{UqMethod::Borel,     UqMethod::Phi11,       UqMethod::Poch,
                                             UqMethod::Symmetric, UqMethod::CauchyHeine, UqMethod::MellinBarnes};
  return methods;
}

Complex phi21_zero(Complex a, Complex b, Complex x, const QContext& ctx) {
  return std::exp(log_phi21_zero(a, b, x, ctx));
}

Complex u_function(Complex a, Complex b, Complex t, const QContext& ctx) { return std::exp(log_u(a, b, t, ctx)); }

Complex k0(Complex a, Complex b, const QContext& ctx) {
  return qpoch_inf(a, ctx) * qpoch_inf(b, ctx) / ctx.qq_inf();
}

bool uq_admissible(const UqPoint& p, UqMethod method, const QContext& ctx, std::string* why) {
  auto fail = [&](const char* reason) {
    if (why) *why = reason;
    return false;
  };
  const Real q = ctx.q();
  const bool small_ab = std::abs(p.a) < 1.0 && std::abs(p.b) < 1.0;
  switch (method) {
    case UqMethod::Borel:
      if (!(std::min(std::abs(p.a), std::abs(p.b)) < 1.0) && !terminating(p.a, ctx) && !terminating(p.b, ctx)) {
        return fail("needs min(|a|,|b|) < 1 for the Borel-plane continuation");
      }
      return true;
    case UqMethod::Phi11:
      return true;
    case UqMethod::Poch:
      if (!(std::abs(p.a * q) < 1.0)) return fail("needs |aq| < 1");
      return true;
    case UqMethod::Symmetric:
      if (!(std::abs(p.a * p.b * p.z.value()) < 1.0)) return fail("needs |abz| < 1");
      return true;
    case UqMethod::CauchyHeine:
      if (!small_ab) return fail("needs |a|, |b| < 1");
      if (!p.kind.discrete() && std::abs(p.z.arg()) >= kPi) return fail("needs |arg z| < pi");
      return true;
    case UqMethod::MellinBarnes:
      if (!small_ab) return fail("needs |a|, |b| < 1");
      if (p.kind.tag() == TransformKind::Tag::Theta && std::abs(p.z.arg()) >= 2.0 * kPi) {
        return fail("needs |arg z| < 2 pi");
      }
      return true;
  }
  return false;
}

std::vector<UqMethod> admissible_methods(const UqPoint& p, const QContext& ctx) {
  std::vector<UqMethod> out;
  for (UqMethod m : all_uq_methods()) {
    if (uq_admissible(p, m, ctx)) out.push_back(m);
  }
  return out;
}

UqMethod default_method(const UqPoint& p) {
  return std::abs(p.a * p.b * p.z.value()) < 1.0 ? UqMethod::Symmetric : UqMethod::Phi11;
}

Complex uq(const UqPoint& p, UqMethod method, const QContext& ctx) {
  std::string why;
  if (!uq_admissible(p, method, ctx, &why)) {
    throw Error(Errc::ConstraintViolation, std::string(to_string(method)) + " " + why);
  }
  if (method == UqMethod::MellinBarnes) return uq_mellin_barnes(p, ctx);
  if (method == UqMethod::CauchyHeine) return uq_cauchy_heine(p, ctx);
  const LogFn g = borel_integrand(method, p.a, p.b, p.z.value(), ctx);
  return qlaplace(p.kind, g, p.z, ctx);
}

Complex y2(KernelKind kappa, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx, int form) {
  const Complex kap = kappa_at(kappa, negate(z.scaled(ctx.q())), ctx);
  const Complex zv = z.value();
  if (form == 0) {
    const Complex x = a * b * zv;
    if (!(std::abs(x) < 1.0)) throw Error(Errc::DivergentSeries, "2phi1 form of y2 needs |abz| < 1");
    const Real q = ctx.q();
    Complex c = 1.0;
    Real qn = q;
    auto term = [&](int n) {
      if (n == 0) return Complex(1.0);
      c *= (a - qn) * (b - qn) * zv / (1.0 - qn);
      qn *= q;
      return c;
    };
    return kap * qpoch_inf(x, ctx) * detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  }
  return kap * u_function(b, a, -zv, ctx);
}

Complex y_infinity(int which, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx) {
  if (which == 4) std::swap(a, b);
  else if (which != 3) throw Error(Errc::ConstraintViolation, "solutions at infinity are numbered 3 and 4");
  if (std::abs(b) == 0.0 || std::abs(a) == 0.0) throw Error(Errc::ConstraintViolation, "needs a, b != 0");
  const Complex x = ctx.q() / (a * b * z.value());
  return z.pow(-std::log(a) / ctx.ln_q()) * phi({{a, 0.0}, {a * ctx.q() / b}}, x, ctx);
}

Residual ode_residual(Solution s, const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                      const QContext& ctx, KernelKind kappa) {
  const Real q = ctx.q();
  const Complex zv = z.value();
  const Complex y0 = solution_value(s, kind, a, b, z, ctx, kappa);
  const Complex y1 = solution_value(s, kind, a, b, z.scaled(1.0 / q), ctx, kappa);
  const Complex y2v = solution_value(s, kind, a, b, z.scaled(1.0 / (q * q)), ctx, kappa);
  return combine({zv * y2v, (q - (a + b) * zv) * y1, -(q - a * b * zv) * y0});
}

Residual wronskian_residual(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                            const QContext& ctx, KernelKind kappa) {
  const KernelKind k = kappa_for(kind, kappa);
  const BranchedComplex zq = z.scaled(1.0 / ctx.q());
  const Complex u0 = uq(UqPoint{a, b, z, kind}, ctx);
  const Complex u1 = uq(UqPoint{a, b, zq, kind}, ctx);
  const Complex w0 = y2(k, a, b, z, ctx);
  const Complex w1 = y2(k, a, b, zq, ctx);
  const Complex rhs = kappa_at(k, negate(z), ctx) * qpoch_inf(a * b * z.value(), ctx);
  return combine({u0 * w1, -u1 * w0, -rhs});
}

Jump monodromy_jump(KernelKind kind, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx) {
  if (kind == KernelKind::Theta && !(z.arg() > -2.0 * kPi && z.arg() < 0.0)) {
    throw Error(Errc::ConstraintViolation, "theta monodromy is taken from arg z in (-2 pi, 0)");
  }
  const TransformKind tk = kind == KernelKind::E ? TransformKind::E() : TransformKind::Theta();
  const Complex up = uq(UqPoint{a, b, z.rotated(2.0 * kPi), tk}, ctx);
  const Complex here = uq(UqPoint{a, b, z, tk}, ctx);
  const Complex closed = -2.0 * kPi * kI * k0(a, b, ctx) * y2(kind, a, b, z, ctx);
  return {up - here, closed};
}

const char* to_string(PkForm f) {
  switch (f) {
    case PkForm::Lambda:
      return "lambda";
    case PkForm::E:
      return "E";
    case PkForm::E2:
      return "E2";
    case PkForm::Theta1:
      return "theta1";
    case PkForm::Theta2:
      return "theta2";
    case PkForm::Theta3:
      return "theta3";
  }
  return "?";
}

Complex pk_multiplier(PkForm form, Complex a, const BranchedComplex& z, const QContext& ctx, Complex lambda) {
  if (std::abs(a) == 0.0) throw Error(Errc::ConstraintViolation, "multiplier needs a != 0");
  return pk_from_log(form, std::log(a), z, ctx, lambda);
}

Complex pk_multiplier(const TransformKind& kind, Complex a, const BranchedComplex& z, const QContext& ctx) {
  if (std::abs(a) == 0.0) throw Error(Errc::ConstraintViolation, "multiplier needs a != 0");
  return pk_kind_log(kind, std::log(a), z, ctx);
}

Complex connection_infinity(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                            const QContext& ctx) {
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) throw Error(Errc::ConstraintViolation, "needs a, b != 0");
  const Real lq = ctx.ln_q();
  const Complex ratio = std::log(b / a) / lq;
  if (std::abs(ratio - std::round(ratio.real())) < 1e-9) {
    throw Error(Errc::ConstraintViolation, "b/a must not be an integer power of q");
  }
  const Complex x = ctx.q() / (a * b * z.value());
  if (!(std::abs(x) < 1.0)) throw Error(Errc::DivergentSeries, "connection formula needs |q/(abz)| < 1");
  const Complex lz = z.log();
  auto part = [&](Complex s, Complex t) {
    const Complex ls = std::log(s);
    return pk_kind_log(kind, ls, z, ctx) * std::exp(-ls * (ls + lz) / lq) * qpoch_inf(t, ctx) /
           qpoch_inf(t / s, ctx) * phi({{s, 0.0}, {s * ctx.q() / t}}, x, ctx);
  };
  return part(a, b) + part(b, a);
}

ConfluentResult connection_confluent(const TransformKind& kind, Complex a, int m, const BranchedComplex& z,
                                     const QContext& ctx) {
  if (m < 0) throw Error(Errc::InvalidN, "confluent index m must be >= 0");
  if (std::abs(a) == 0.0) throw Error(Errc::ConstraintViolation, "needs a != 0");
  const Real q = ctx.q(), lq = ctx.ln_q();
  const Complex b = a * std::pow(q, m);
  const Complex la = std::log(a), lz = z.log();
  const Complex x = q / (a * b * z.value());
  if (!(std::abs(x) < 1.0)) throw Error(Errc::DivergentSeries, "connection formula needs |q/(abz)| < 1");

  ConfluentResult out;
  out.pk = pk_kind_log(kind, la, z, ctx);
  const Real h = out.step;
  auto central = [&](Real step) {
    return (pk_kind_log(kind, la + step, z, ctx) - pk_kind_log(kind, la - step, z, ctx)) / (2.0 * step);
  };
  out.a_dpk_da = (4.0 * central(0.5 * h) - central(h)) / 3.0;

  const Complex qm = qpoch_n(q, m, ctx);
  const Real qbin = std::pow(q, detail::binom2(m));
  Complex first = 0.0;
  if (m > 0) {
    detail::Accumulator acc;
    const Complex qneg = std::pow(q, -m);
    for (int n = 0; n < m; ++n) {
      acc.add(qpoch_n(a, n, ctx) / (qpoch_n(qneg, n + 1, ctx) * qpoch_n(q, n, ctx)) * std::pow(x, n));
    }
    first = -out.pk * qm / (std::pow(q, m) * qpoch_n(a, m, ctx)) * acc.value();
  }
  const Complex labz = 2.0 * la + Real(m) * lq + lz;
  const Complex second = (out.pk * (1.0 - labz / lq) + out.a_dpk_da) * qbin *
                         phi({{b, 0.0}, {std::pow(q, m + 1)}}, x, ctx) /
                         (qm * std::pow(-a * b * z.value() / q, m));
  Complex bn = 1.0, qn_fact = 1.0, qmn_fact = qm;
  Complex xn = std::pow(x, m);
  auto term = [&](int n) {
    if (n > 0) {
      bn *= 1.0 - b * std::pow(q, n - 1);
      qn_fact *= 1.0 - std::pow(q, n);
      qmn_fact *= 1.0 - std::pow(q, m + n);
      xn *= x;
    }
    const Complex psis = psi_q(b * std::pow(q, n), ctx) - psi_q(std::pow(q, m + n + 1), ctx) -
                         psi_q(std::pow(q, n + 1), ctx);
    return bn / (qmn_fact * qn_fact) * xn * psis;
  };
  const Complex third = out.pk * ((m % 2 == 0) ? 1.0 : -1.0) * qbin *
                        detail::unilateral_sum(term, series_tol(ctx), ctx.max_terms()).value;
  const Complex lhs_factor = std::exp(la * (la + lz) / lq) * ctx.qq_inf() / qpoch_inf(a, ctx);
  out.value = (first + second + third) / lhs_factor;
  return out;
}

const char* to_string(BoundZone z) {
  switch (z) {
    case BoundZone::HalfPlane:
      return "half-plane";
    case BoundZone::SectorE:
      return "sector-E";
    case BoundZone::SectorTheta:
      return "sector-Theta";
    case BoundZone::SectorDiscrete:
      return "sector-Discrete";
  }
  return "?";
}

Real estimate_Mq(Complex a, Complex b, const QContext& ctx, int radial_points, int rays) {
  if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) throw Error(Errc::ConstraintViolation, "M_q needs |a|, |b| < 1");
  if (radial_points < 2 || rays < 2) throw Error(Errc::InvalidN, "M_q grid too small");
  const Real c = std::max(std::abs(a), std::abs(b));
  const Real q = ctx.q();
  Real best = 0.0;
  for (int j = 0; j < rays; ++j) {
    const Real angle = -0.5 * kPi + kPi * j / (rays - 1);
    for (int i = 0; i < radial_points; ++i) {
      const Real r = std::pow(10.0, -3.0 + 6.0 * i / (radial_points - 1));
      const Complex t = std::polar(r, angle);
      const Real lr = log_u(a, b, t, ctx).real() - log_qp(-c * q * r, ctx).real();
      best = std::max(best, std::exp(lr));
    }
  }
  return 1.25 * best;
}

Complex phi20_partial_sum(Complex a, Complex b, const BranchedComplex& z, int N, const QContext& ctx) {
  const Real q = ctx.q();
  const Complex zv = z.value();
  detail::Accumulator acc;
  Complex c = 1.0;
  for (int n = 0; n < N; ++n) {
    acc.add(c);
    const Real qn = std::pow(q, n);
    c *= (1.0 - a * qn) * (1.0 - b * qn) / (1.0 - qn * q) * (-zv) / qn;
  }
  return acc.value();
}

RemainderBound remainder_and_bound(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z, int N,
                                   const QContext& ctx, std::optional<Real> M_q) {
  RemainderBound out;
  out.N = N;
  out.c = std::max(std::abs(a), std::abs(b));
  const Real phi_arg = std::abs(z.arg());
  if (phi_arg >= kPi) throw Error(Errc::ConstraintViolation, "remainder bounds hold for |arg z| < pi");
  if (phi_arg <= 0.5 * kPi) {
    out.zone = BoundZone::HalfPlane;
  } else {
    switch (kind.tag()) {
      case TransformKind::Tag::E:
        out.zone = BoundZone::SectorE;
        break;
      case TransformKind::Tag::Theta:
        out.zone = BoundZone::SectorTheta;
        break;
      default:
        out.zone = BoundZone::SectorDiscrete;
    }
  }
  if (kind.discrete()) {
    const Complex lam = kind.lambda();
    if (!(lam.imag() == 0.0 && lam.real() > 0.0)) {
      throw Error(Errc::ConstraintViolation, "the discrete remainder bound needs lambda > 0");
    }
  }
  require_bound_zone_ok(N, out.c, kind, out.zone, ctx);
  out.M_q = M_q ? *M_q : estimate_Mq(a, b, ctx);
  out.remainder = uq(UqPoint{a, b, z, kind}, ctx) - phi20_partial_sum(a, b, z, N, ctx);

  const Real q = ctx.q(), lq = ctx.ln_q();
  Real bound = std::pow(z.modulus(), N) * std::abs(k0(a, b, ctx)) * out.M_q * std::pow(q, -detail::binom2(N)) /
               std::abs(qpoch_inf(out.c * std::pow(q, N), ctx));
  const Real zeta = phi_arg - 0.5 * kPi;
  switch (out.zone) {
    case BoundZone::HalfPlane:
      break;
    case BoundZone::SectorE:
      bound *= std::exp(-zeta * zeta / (2.0 * lq));
      break;
    case BoundZone::SectorTheta: {
      const Real qh = ctx.q_hat();
      const Real p = std::abs(QContext::make(qh * qh).qq_inf());
      bound *= std::exp(-zeta * zeta / (2.0 * lq)) / (p * p * p) * (1.0 + std::sqrt(qh)) / (1.0 - std::sqrt(qh));
      break;
    }
    case BoundZone::SectorDiscrete:
      bound /= std::abs(std::sin(z.arg()));
      break;
  }
  out.bound = bound;
  return out;
}

std::array<Residual, 3> recurrence_residuals(const TransformKind& kind, Complex a, Complex b,
                                             const BranchedComplex& z, const QContext& ctx) {
  const Real q = ctx.q();
  const Complex zv = z.value();
  auto U = [&](Complex aa, Complex bb, const BranchedComplex& w) { return uq(UqPoint{aa, bb, w, kind}, ctx); };
  const Complex u = U(a, b, z);
  const Complex u_qb = U(a, q * b, z);
  const Complex u_qa = U(q * a, b, z);
  return {combine({(1.0 - b) * u_qb, b * U(a, b, z.scaled(q)), -u}),
          combine({b * (1.0 - a) * u_qa, -a * (1.0 - b) * u_qb, (a - b) * u}),
          combine({(1.0 - a * b * q * zv) * (1.0 - a * q) * U(q * q * a, b, z),
                   -(1.0 + (1.0 - a) * q - (b - a * q) * q * a * zv) * u_qa, q * u})};
}

Complex cf_convergent(int n, Complex a, Complex b, Complex z, const QContext& ctx) {
  if (n < 0 || n > 200) throw Error(Errc::InvalidN, "continued fraction depth must lie in 0..200");
  if (n == 0) return 1.0;
  const Real q = ctx.q();
  auto alpha = [&](int k) {
    const int j = (k % 2 == 1) ? (k - 1) / 2 : k / 2;
    const Complex top = (k % 2 == 1) ? 1.0 - a * std::pow(q, j) : 1.0 - b * std::pow(q, j);
    return top * std::pow(q, -k);
  };
  Complex t = 1.0 + alpha(n) * z;
  for (int k = n - 1; k >= 1; --k) {
    if (std::abs(t) == 0.0) {
      throw Error(Errc::ZeroDivision, "continued fraction tail vanishes at index " + std::to_string(k + 1));
    }
    t = 1.0 + alpha(k) * z / t;
  }
  if (!std::isfinite(std::abs(t))) throw Error(Errc::ZeroDivision, "continued fraction overflowed");
  return t;
}

CfGap cf_gap(Complex a, Complex b, Complex z, const QContext& ctx, int n_max) {
  // Keep alpha_n z finite.
  const int cap = static_cast<int>(std::floor(280.0 * std::log(10.0) / -ctx.ln_q()));
  n_max = std::min({n_max, cap, 200});
  if (n_max < 4) throw Error(Errc::InvalidN, "continued fraction depth too small");
  CfGap out;
  Complex prev_even = cf_convergent(2, a, b, z, ctx), prev_odd = cf_convergent(1, a, b, z, ctx);
  int stable_runs = 0;
  for (int n = 3; n <= n_max; ++n) {
    const Complex c = cf_convergent(n, a, b, z, ctx);
    Complex& prev = (n % 2 == 0) ? prev_even : prev_odd;
    const bool settled = std::abs(c - prev) <= 1e-13 * std::abs(c);
    prev = c;
    stable_runs = settled ? stable_runs + 1 : 0;
    out.n_used = n;
    if (stable_runs >= 4) {
      out.stabilised = true;
      break;
    }
  }
  out.even_limit = prev_even;
  out.odd_limit = prev_odd;
  out.gap = std::abs(prev_even - prev_odd);
  return out;
}

Complex cf_target(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx) {
  return uq(UqPoint{a, b, z, kind}, ctx) / uq(UqPoint{a, b * ctx.q(), z.scaled(1.0 / ctx.q()), kind}, ctx);
}

}  // namespace qresum
