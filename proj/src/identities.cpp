#include "qresum/identities.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "qresum/detail/summation.hpp"
#include "qresum/detail/trig.hpp"
#include "qresum/qcore.hpp"

namespace qresum {

namespace {

struct Sides {
  Complex lhs;
  Complex rhs;
  std::string note;
  Real zero_scale = 0.0;
};

using Evaluator = std::function<Sides(const ParamRecord&, const QContext&)>;

Real sum_tol(const QContext& ctx) { return ctx.eps() * 1e-4; }

Complex qq3(const QContext& ctx) {
  const Real p = ctx.qq_inf();
  return p * p * p;
}

void require_theta_nonzero(Complex tau, const QContext& ctx, const char* what) {
  if (tau == Complex(0.0) || std::abs(theta_q(tau, ctx)) < kThetaPoleFloor) {
    throw Error(Errc::ConstraintViolation, std::string(what) + " lies on the zero set of theta_q");
  }
  // Stay clear of the lattice -q^n where log-derivatives blow up.
  const Real k = std::log(std::abs(tau)) / ctx.ln_q();
  const Real nearest = std::round(k);
  const Complex lattice = -std::exp(nearest * ctx.ln_q());
  if (std::abs(tau - lattice) < 1e-8 * std::abs(lattice)) {
    throw Error(Errc::ConstraintViolation, std::string(what) + " is too close to -q^n");
  }
}

Complex theta_ratio(Complex num, Complex den, const QContext& ctx) {
  return std::exp(log_theta_q(num, ctx) - log_theta_q(den, ctx));
}

// tau theta'/theta and its derivative from the bilateral series alone.
struct SeriesLogderiv {
  Complex value;
  Complex derivative;
};

SeriesLogderiv series_logderiv(Complex tau, const QContext& ctx) {
  const Real r = std::abs(tau);
  const int m = static_cast<int>(std::floor(-std::log(r) / ctx.ln_q())) + 1;
  const Complex t = tau * std::exp(m * ctx.ln_q());
  const Complex lt = std::log(t);
  auto c = [&](int n) { return std::exp(detail::binom2(n) * ctx.ln_q() + static_cast<Real>(n) * lt); };
  const Real tol = sum_tol(ctx);
  const Complex s0 = detail::bilateral_sum(c, tol, ctx.max_terms()).value;
  const Complex s1 = detail::bilateral_sum([&](int n) { return static_cast<Real>(n) * c(n); }, tol, ctx.max_terms()).value;
  const Complex s2 =
      detail::bilateral_sum([&](int n) { return static_cast<Real>(n) * n * c(n); }, tol, ctx.max_terms()).value;
  const Complex l = s1 / s0;
  return {static_cast<Real>(m) + l, std::exp(m * ctx.ln_q()) * (s2 / s0 - l * l) / t};
}

Sides partfrac1(const ParamRecord& p, const QContext& ctx) {
  const Complex x = p.get("x");
  require_theta_nonzero(x, ctx, "x");
  auto term = [&](int n) {
    const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Real qn = std::exp(n * ctx.ln_q());
    return sign * std::exp(0.5 * n * (n + 1.0) * ctx.ln_q()) / (x * qn + 1.0);
  };
  const Complex sum = detail::bilateral_sum(term, sum_tol(ctx), ctx.max_terms()).value;
  return {1.0 / theta_q(x, ctx), sum / qq3(ctx), ""};
}

Sides partfrac2(const ParamRecord& p, const QContext& ctx) {
  const Complex a = p.get("a");
  const Complex x = p.get("x");
  if (!(std::abs(a) > ctx.q() && std::abs(a) < 1.0)) {
    throw Error(Errc::ConstraintViolation, "partfrac2 needs q < |a| < 1");
  }
  require_theta_nonzero(x, ctx, "x");
  const Complex la = std::log(a);
  auto term = [&](int n) -> Complex {
    if (n >= 0) return std::exp(static_cast<Real>(n) * la) / (1.0 + x * std::exp(n * ctx.ln_q()));
    return std::exp(static_cast<Real>(n) * (la - ctx.ln_q())) / (std::exp(-n * ctx.ln_q()) + x);
  };
  const Complex sum = detail::bilateral_sum(term, sum_tol(ctx), ctx.max_terms()).value;
  return {theta_ratio(a * x, x, ctx), theta_q(-a, ctx) * sum / qq3(ctx), ""};
}

Sides partfrac2a(const ParamRecord& p, const QContext& ctx) {
  const Complex a = p.get("a");
  const Complex x = p.get("x");
  if (std::abs(std::arg(x)) >= kPi * (1.0 - 1e-6)) {
    throw Error(Errc::ConstraintViolation, "partfrac2a needs |arg x| < pi");
  }
  require_theta_nonzero(x, ctx, "x");
  require_theta_nonzero(-a, ctx, "-a");
  const Complex la = std::log(a);
  const Complex lx = std::log(x);
  auto term = [&](int n) {
    const Complex s = (2.0 * kPi * n * kI + la) / ctx.ln_q();
    return std::exp(-s * lx + detail::log_inv_sin(kPi * s));
  };
  const Complex sum = detail::bilateral_sum(term, sum_tol(ctx), ctx.max_terms()).value;
  const Complex rhs = -kPi * theta_q(-a, ctx) / (qq3(ctx) * ctx.ln_q()) * sum;
  return {theta_ratio(a * x, x, ctx), rhs, ""};
}

// p (x - y) / ((x + p)(y + p)) for n >= 0 and p (x - y) / ((xp + 1)(yp + 1)) for n < 0, p = q^|n|.
Complex sumdiff_term(int n, Complex x, Complex y, const QContext& ctx) {
  const Real p = std::exp(std::abs(n) * ctx.ln_q());
  if (n >= 0) return p * (x - y) / ((x + p) * (y + p));
  return p * (x - y) / ((x * p + 1.0) * (y * p + 1.0));
}

Sides theta_sumdiff(const ParamRecord& p, const QContext& ctx) {
  const Complex x = p.get("x");
  const Complex y = p.get("y");
  require_theta_nonzero(x, ctx, "x");
  require_theta_nonzero(y, ctx, "y");
  const Complex lhs = series_logderiv(x, ctx).value - series_logderiv(y, ctx).value;
  auto term = [&](int n) { return sumdiff_term(n, x, y, ctx); };
  const Complex rhs = detail::bilateral_sum(term, sum_tol(ctx), ctx.max_terms()).value;
  Sides s{lhs, rhs, ""};
  if (x == y) s.zero_scale = 1.0;
  return s;
}

Sides theta_sumderiv(const ParamRecord& p, const QContext& ctx) {
  const Complex x = p.get("x");
  require_theta_nonzero(x, ctx, "x");
  auto term = [&](int n) -> Complex {
    const Real pn = std::exp(std::abs(n) * ctx.ln_q());
    if (n >= 0) return pn / ((x + pn) * (x + pn));
    return pn / ((x * pn + 1.0) * (x * pn + 1.0));
  };
  const Complex rhs = detail::bilateral_sum(term, sum_tol(ctx), ctx.max_terms()).value;
  return {series_logderiv(x, ctx).derivative, rhs, ""};
}

Sides elliptic(const ParamRecord& p, const QContext& ctx) {
  const Complex x = p.get("x");
  const Complex y = p.get("y");
  const Complex z = p.get("z");
  for (auto [v, name] : {std::pair{x, "x"}, std::pair{y, "y"}, std::pair{x / z, "x/z"}, std::pair{y / z, "y/z"}}) {
    require_theta_nonzero(v, ctx, name);
  }
  // The logarithmic parts cancel exactly when the four arguments share branches,
  // leaving only the q-periodic parts; this keeps qhat-sized values accurate.
  const auto bx = BranchedComplex::principal(x);
  const auto by = BranchedComplex::principal(y);
  const auto bz = BranchedComplex::principal(z);
  const Complex lhs = theta_q_logderiv_periodic(bx, ctx) - theta_q_logderiv_periodic(bx / bz, ctx) -
                      theta_q_logderiv_periodic(by, ctx) + theta_q_logderiv_periodic(by / bz, ctx);
  const Complex log_num = log_theta_q(-z, ctx) + log_theta_q(-x / y, ctx) + log_theta_q(-x * y / z, ctx);
  const Complex log_den = log_theta_q(x, ctx) + log_theta_q(y, ctx) + log_theta_q(x / z, ctx) + log_theta_q(z / y, ctx);
  const Complex rhs = log_num.real() == -INFINITY ? Complex(0.0) : qq3(ctx) * std::exp(log_num - log_den);
  Sides s{lhs, rhs, ""};
  if (rhs == Complex(0.0)) s.zero_scale = 1.0;
  return s;
}

Sides eqab(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex a = branched_param(p, "a");
  const BranchedComplex b = branched_param(p, "b");
  const BranchedComplex t = branched_param(p, "t");
  const Complex lhs =
      std::exp(log_e_q(a * t, ctx) + log_e_q(b * t, ctx) - log_e_q(t, ctx) - log_e_q(a * b * t, ctx));
  const Complex rhs = std::exp(-a.log() * b.log() / ctx.ln_q());
  return {lhs, rhs, ""};
}

Sides bridge(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  require_theta_nonzero(tau.value(), ctx, "tau");
  const Complex lhs = ctx.c_q() * e_q(tau, ctx);
  const Complex rhs = -p_q(tau, ctx) / (ctx.ln_q() * theta_q(tau, ctx));
  return {lhs, rhs, "C_q E_q(tau) against -P_q(tau) / (ln q theta_q(tau))"};
}

Sides theta_quotient(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex a = branched_param(p, "a");
  const BranchedComplex b = branched_param(p, "b");
  const BranchedComplex x = branched_param(p, "x");
  require_theta_nonzero((b * x).value(), ctx, "bx");
  const Complex lhs = theta_ratio((a * x).value(), (b * x).value(), ctx);
  const Complex power = x.pow((b.log() - a.log()) / ctx.ln_q());
  const Complex rhs = power * std::exp(log_e_q(b, ctx) - log_e_q(a, ctx)) * p_q(a * x, ctx) / p_q(b * x, ctx);
  return {lhs, rhs, ""};
}

Complex monodromy_closed_form(const BranchedComplex& tau, const QContext& ctx) {
  return -std::exp(-ctx.ln_q_hat() + 2.0 * kPi * kI / ctx.ln_q() * tau.log());
}

Sides monodromy_e(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  const Complex lhs = std::exp(log_e_q(tau.rotated(2.0 * kPi), ctx) - log_e_q(tau, ctx));
  return {lhs, monodromy_closed_form(tau, ctx), ""};
}

Sides monodromy_p(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  const Complex lhs = p_q(tau.rotated(2.0 * kPi), ctx) / p_q(tau, ctx);
  return {lhs, monodromy_closed_form(tau, ctx), "Fourier-series P_q on two sheets"};
}

Sides pq_product(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  return {p_q(tau, ctx), p_q_product(tau, ctx), "Fourier series against -ln q C_q E_q theta_q"};
}

Sides pq_gaussian(const ParamRecord& p, const QContext& ctx) {
  const Complex t = p.get("t");
  return {p_q_gaussian(t, ctx), p_q_at(t, ctx), "Gaussian sum against Fourier series"};
}

Sides pq_minus(const ParamRecord& p, const QContext& ctx) {
  const Real t = p.real("t");
  const BranchedComplex tau(std::exp(t * ctx.ln_q()), kPi);
  const Complex rhs = -kI * std::exp(kI * kPi * t) * std::exp(-0.25 * ctx.ln_q_hat()) *
                      jacobi_theta1(kPi * t, ctx.q_hat(), ctx);
  Sides s{p_q(tau, ctx), rhs, ""};
  if (t == std::round(t)) s.zero_scale = 1.0;
  return s;
}

Sides pq_int(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex z = p.has("z") ? branched_param(p, "z") : BranchedComplex::positive(1.0);
  constexpr int kPoints = 64;
  detail::Accumulator acc;
  for (int j = 0; j < kPoints; ++j) {
    const Real t = static_cast<Real>(j) / kPoints;
    acc.add(p_q(z.scaled(std::exp(t * ctx.ln_q())), ctx));
  }
  return {acc.value() / static_cast<Real>(kPoints), 1.0, "64-point periodic trapezoid"};
}

Sides pq_period(const ParamRecord& p, const QContext& ctx) {
  const Complex t = p.get("t");
  const auto at = [&](Complex s) { return p_q_product(BranchedComplex::from_log(s * ctx.ln_q()), ctx); };
  return {at(t + 1.0), at(t), "product form at t+1 and t"};
}

Sides pq_reciprocal(const ParamRecord& p, const QContext& ctx) {
  const Real t = p.real("t");
  const QContext hat2 = QContext::make(ctx.q_hat() * ctx.q_hat());
  const Real norm = std::pow(hat2.qq_inf(), 3);
  detail::Accumulator acc;
  acc.add(p_q_reciprocal_coeff(0, ctx));
  for (int n = 1; n < ctx.max_terms(); ++n) {
    const Real w = std::exp(n * ctx.ln_q_hat());
    if (w < 1e-18) break;
    acc.add(2.0 * p_q_reciprocal_coeff(n, ctx) * w * std::cos(2.0 * kPi * n * t));
  }
  return {1.0 / p_q_at(t, ctx), acc.value() / norm, ""};
}

Sides pq_recurrence(const ParamRecord& p, const QContext& ctx) {
  const int n = static_cast<int>(p.real("n"));
  const Real lhs = std::exp((2.0 * n + 2.0) * ctx.ln_q_hat()) * p_q_reciprocal_coeff(n + 1, ctx) +
                   p_q_reciprocal_coeff(n, ctx);
  return {lhs, 1.0, ""};
}

Sides pq_normalisation(const ParamRecord&, const QContext& ctx) {
  const Real h2 = ctx.q_hat() * ctx.q_hat();
  const QContext hat2 = QContext::make(h2);
  detail::Accumulator acc;
  Real poch = 1.0;  // (qhat^2; qhat^2)_n
  for (int n = 0; n < ctx.max_terms(); ++n) {
    const Real sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Real w = std::exp(static_cast<Real>(n) * (n + 1.0) * ctx.ln_q_hat());
    acc.add(sign * w * p_q_reciprocal_coeff(n, ctx) / poch);
    if (w < 1e-20) break;
    poch *= 1.0 - std::pow(h2, n + 1);
  }
  return {acc.value(), hat2.qq_inf() * hat2.qq_inf(), ""};
}

Sides theta_product_series(const ParamRecord& p, const QContext& ctx) {
  const Complex tau = p.get("tau");
  return {theta_q(tau, ctx), theta_q_series(tau, ctx), "triple product against bilateral series"};
}

// log of the kernel F: 0 selects E_q, 1 selects 1/theta_q.
Complex log_f(int kind, const BranchedComplex& tau, const QContext& ctx) {
  if (kind == 0) return log_e_q(tau, ctx);
  return -log_theta_q(tau.value(), ctx);
}

Sides quasi_periodicity(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  const int kind = static_cast<int>(p.real("kind"));
  const Real n = p.real("n");
  if (kind == 1 && n != std::round(n)) {
    throw Error(Errc::ConstraintViolation, "1/theta_q is quasi-periodic only for integer shifts");
  }
  const Complex lhs = std::exp(log_f(kind, tau.scaled(std::exp(n * ctx.ln_q())), ctx));
  const Complex rhs = std::exp(n * tau.log() + detail::binom2(n) * ctx.ln_q() + log_f(kind, tau, ctx));
  return {lhs, rhs, kind == 0 ? "F = E_q" : "F = 1/theta_q"};
}

Sides reflection(const ParamRecord& p, const QContext& ctx) {
  const BranchedComplex tau = branched_param(p, "tau");
  const int kind = static_cast<int>(p.real("kind"));
  const Complex lhs = std::exp(log_f(kind, tau.inverse(), ctx));
  const Complex rhs = tau.value() * std::exp(log_f(kind, tau, ctx));
  return {lhs, rhs, kind == 0 ? "F = E_q" : "F = 1/theta_q"};
}

const std::map<std::string, Evaluator>& registry() {
  static const std::map<std::string, Evaluator> r = {
      {"partfrac1", partfrac1},
      {"partfrac2", partfrac2},
      {"partfrac2a", partfrac2a},
      {"theta_sumdiff", theta_sumdiff},
      {"theta_sumderiv", theta_sumderiv},
      {"elliptic", elliptic},
      {"eqab", eqab},
      {"bridge", bridge},
      {"theta_quotient", theta_quotient},
      {"monodromy_E", monodromy_e},
      {"monodromy_P", monodromy_p},
      {"pq_product", pq_product},
      {"pq_gaussian", pq_gaussian},
      {"pq_minus", pq_minus},
      {"pq_int", pq_int},
      {"pq_period", pq_period},
      {"pq_reciprocal", pq_reciprocal},
      {"pq_recurrence", pq_recurrence},
      {"pq_normalisation", pq_normalisation},
      {"theta_product_series", theta_product_series},
      {"quasi_periodicity", quasi_periodicity},
      {"reflection", reflection},
  };
  return r;
}

}  // namespace

BranchedComplex branched_param(const ParamRecord& point, const std::string& name) {
  const Complex v = point.get(name);
  if (point.has(name + "_arg")) return {std::abs(v), point.real(name + "_arg")};
  return BranchedComplex::principal(v);
}

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
  }();
  return ids;
}

VerificationReport identity_eval(const std::string& id, const ParamRecord& point, const QContext& ctx, Real tol) {
  const auto& r = registry();
  const auto it = r.find(id);
  if (it == r.end()) throw Error(Errc::UnknownIdentity, "no identity named '" + id + "'");
  ParamRecord full = point;
  full.set("q", ctx.q());
  const Sides s = it->second(point, ctx);
  return make_report(id, std::move(full), s.lhs, s.rhs, tol, s.note, s.zero_scale);
}

std::vector<ParamRecord> identity_default_grid(const std::string& id, const QContext& ctx) {
  const Real q = ctx.q();
  const Real sq = std::sqrt(q);
  const Complex c1{0.45, 0.2};
  const Complex c2{-0.35, 0.15};
  std::vector<ParamRecord> g;
  if (id == "partfrac1" || id == "theta_sumderiv" || id == "theta_product_series") {
    const char* key = id == "theta_product_series" ? "tau" : "x";
    for (Complex x : {Complex(0.6), Complex(0.3), Complex(1.7), c1, c2, Complex(-2.3, 0.4)}) g.push_back({{key, x}});
  } else if (id == "partfrac2") {
    for (Complex a : {Complex(sq), Complex(0.5 * (1.0 + q)), std::polar(sq, 0.5)}) {
      for (Complex x : {Complex(0.4), Complex(2.5), Complex(0.3, 0.4)}) g.push_back({{"a", a}, {"x", x}});
    }
  } else if (id == "partfrac2a") {
    for (Complex a : {Complex(sq), Complex(0.5 * (1.0 + q))}) {
      for (Complex x : {Complex(0.5), Complex(1.3), std::polar(0.7, 1.0), std::polar(0.8, -2.0)}) {
        g.push_back({{"a", a}, {"x", x}});
      }
    }
  } else if (id == "theta_sumdiff") {
    g.push_back({{"x", 0.3}, {"y", 0.7}});
    g.push_back({{"x", 0.3}, {"y", 0.3}});
    g.push_back({{"x", c1}, {"y", 1.9}});
    g.push_back({{"x", c2}, {"y", Complex(0.2, -0.5)}});
  } else if (id == "elliptic") {
    g.push_back({{"x", 0.3}, {"y", 0.7}, {"z", 0.4}});
    g.push_back({{"x", c1}, {"y", 1.3}, {"z", Complex(0.5, 0.3)}});
    g.push_back({{"x", 0.8}, {"y", c2}, {"z", 2.2}});
  } else if (id == "eqab") {
    g.push_back({{"a", 1.0}, {"b", 1.0}, {"t", 0.7}});
    g.push_back({{"a", 0.4}, {"b", 2.5}, {"t", 0.7}});
    g.push_back({{"a", c1}, {"b", 1.3}, {"t", Complex(0.2, 0.9)}});
    g.push_back({{"a", 0.6}, {"a_arg", 2.0 * kPi + 0.3}, {"b", 0.9}, {"t", 1.1}, {"t_arg", -1.0}});
  } else if (id == "bridge" || id == "pq_product") {
    for (Complex t : {Complex(0.42), Complex(2.7), c1, Complex(0.3, -0.6)}) g.push_back({{"tau", t}});
    g.push_back({{"tau", 0.6}, {"tau_arg", 3.0}});
  } else if (id == "theta_quotient") {
    g.push_back({{"a", 0.3}, {"b", 0.7}, {"x", 0.9}});
    g.push_back({{"a", c1}, {"b", 1.6}, {"x", Complex(0.4, 0.5)}});
    g.push_back({{"a", 0.5}, {"b", 0.8}, {"x", 0.9}, {"x_arg", 2.0 * kPi + 0.5}});
  } else if (id == "monodromy_E" || id == "monodromy_P") {
    for (Complex t : {Complex(0.42), Complex(2.7), c1}) g.push_back({{"tau", t}});
  } else if (id == "pq_gaussian") {
    for (Complex t : {Complex(0.3), Complex(0.0), Complex(1.7), Complex(0.3, 0.2), Complex(-2.4, -0.1)}) {
      g.push_back({{"t", t}});
    }
  } else if (id == "pq_minus" || id == "pq_reciprocal") {
    for (Real t : {0.3, 0.0, 0.77, -1.4}) g.push_back({{"t", t}});
  } else if (id == "pq_int") {
    g.push_back({});
    g.push_back({{"z", 0.37}});
    g.push_back({{"z", Complex(0.5, 0.5)}});
  } else if (id == "pq_period") {
    for (Complex t : {Complex(0.3), Complex(-0.8), Complex(0.1, 0.2)}) g.push_back({{"t", t}});
  } else if (id == "pq_recurrence") {
    for (int n = 0; n <= 10; ++n) g.push_back({{"n", static_cast<Real>(n)}});
  } else if (id == "pq_normalisation") {
    g.push_back({});
  } else if (id == "quasi_periodicity") {
    for (int kind = 0; kind <= 1; ++kind) {
      for (int n = -3; n <= 3; ++n) {
        g.push_back({{"tau", c1}, {"kind", static_cast<Real>(kind)}, {"n", static_cast<Real>(n)}});
      }
    }
    g.push_back({{"tau", 0.8}, {"kind", 0.0}, {"n", 0.5}});
  } else if (id == "reflection") {
    for (int kind = 0; kind <= 1; ++kind) {
      g.push_back({{"tau", 0.37}, {"kind", static_cast<Real>(kind)}});
      g.push_back({{"tau", c1}, {"kind", static_cast<Real>(kind)}});
    }
  } else {
    throw Error(Errc::UnknownIdentity, "no identity named '" + id + "'");
  }
  return g;
}

}  // namespace qresum
