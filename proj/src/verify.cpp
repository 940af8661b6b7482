#include "qresum/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <thread>

#include "qresum/detail/summation.hpp"
#include "qresum/detail/trig.hpp"
#include "qresum/identities.hpp"
#include "qresum/laplace.hpp"
#include "qresum/qcore.hpp"
#include "qresum/quad.hpp"
#include "qresum/stokes.hpp"
#include "qresum/uq.hpp"

namespace qresum {

namespace {

using Reports = std::vector<VerificationReport>;

struct Check {
  std::string label;
  ParamRecord point;
  std::function<Reports()> run;
};

using Checks = std::vector<Check>;
using Builder = std::function<void(const QContext&, Checks&)>;

ParamRecord with_q(ParamRecord p, const QContext& ctx) {
  p.set("q", ctx.q());
  return p;
}

ParamRecord with_z(ParamRecord p, const BranchedComplex& z) {
  p.set("z", z.value());
  p.set("z_arg", z.arg());
  return p;
}

// Pass iff value <= bound; rel_err holds the ratio value / bound.
VerificationReport bound_report(std::string id, ParamRecord point, Real value, Real bound, std::string note) {
  VerificationReport r;
  r.identity_id = std::move(id);
  r.point = std::move(point);
  r.lhs = value;
  r.rhs = bound;
  r.abs_err = std::abs(value - bound);
  r.rel_err = value / std::max(bound, kRelErrFloor);
  r.pass = value <= bound;
  r.note = std::move(note);
  return r;
}

// Relative check, or an absolute one at `floor` when the expected value is
// below `floor`.
VerificationReport floored_report(std::string id, ParamRecord point, Complex lhs, Complex rhs, Real tol, Real floor) {
  if (std::abs(rhs) > floor) return make_report(std::move(id), std::move(point), lhs, rhs, tol);
  return make_report(std::move(id), std::move(point), lhs, rhs, tol, "below resolution; absolute check", floor / tol);
}

std::vector<TransformKind> all_kinds(const QContext& ctx, Complex lambda) {
  return {TransformKind::E(), TransformKind::Theta(), TransformKind::Discrete(lambda, ctx)};
}

ParamRecord kind_point(const TransformKind& k, ParamRecord p) {
  set_kind(p, k);
  return p;
}

BranchedComplex pos(Real x) { return BranchedComplex::positive(x); }

// ---- structural identities --------------------------------------------------

void identity_checks(const std::vector<std::pair<std::string, Real>>& ids, const QContext& ctx, Checks& out) {
  for (const auto& [id, tol] : ids) {
    for (const auto& p : identity_default_grid(id, ctx)) {
      out.push_back({id, with_q(p, ctx), [id = id, tol = tol, p, ctx] { return Reports{identity_eval(id, p, ctx, tol)}; }});
    }
  }
}

void build_lemma21(const QContext& ctx, Checks& out) {
  identity_checks({{"partfrac1", 1e-9},
                   {"partfrac2", 1e-9},
                   {"partfrac2a", 1e-9},
                   {"theta_sumdiff", 1e-9},
                   {"theta_sumderiv", 1e-9},
                   {"elliptic", 1e-9},
                   {"eqab", 1e-9},
                   {"bridge", 1e-9},
                   {"theta_quotient", 1e-9}},
                  ctx, out);
}

void build_pq(const QContext& ctx, Checks& out) {
  identity_checks({{"pq_int", 1e-10},
                   {"pq_gaussian", 1e-11},
                   {"pq_reciprocal", 1e-12},
                   {"pq_recurrence", 1e-12},
                   {"pq_normalisation", 1e-12},
                   {"pq_minus", 1e-11},
                   {"pq_product", 1e-9},
                   {"pq_period", 1e-9},
                   {"monodromy_E", 1e-9},
                   {"monodromy_P", 1e-9},
                   {"theta_product_series", 1e-9},
                   {"quasi_periodicity", 1e-9},
                   {"reflection", 1e-9}},
                  ctx, out);
}

// ---- transforms ---------------------------------------------------------------

void build_table1(const QContext& ctx, Checks& out) {
  constexpr Real tol = 1e-8;
  auto add = [&](int row, ParamRecord p) {
    out.push_back({"table1.row" + std::to_string(row), with_q(p, ctx),
                   [row, p, ctx] { return Reports{table1_verify(row, p, ctx, tol)}; }});
  };
  for (const auto& k : all_kinds(ctx, 1.3)) {
    for (int probe = 0; probe < 3; ++probe) {
      for (int n = 1; n <= 2; ++n) add(1, kind_point(k, {{"z", 0.5}, {"n", Real(n)}, {"probe", Real(probe)}}));
      add(2, kind_point(k, {{"z", 0.6}, {"probe", Real(probe)}}));
      add(3, kind_point(k, {{"z", 0.6}, {"probe", Real(probe)}}));
    }
    for (int n = 0; n <= 3; ++n) add(4, kind_point(k, {{"z", 0.7}, {"n", Real(n)}}));
    for (Real z : {0.3, 0.5, 1.5}) {
      add(5, kind_point(k, {{"z", z}, {"a", 0.3}}));
      add(6, kind_point(k, {{"z", z}, {"b", 0.2}}));
      add(7, kind_point(k, {{"z", z}, {"a", 0.3}, {"b", 0.2}}));
    }
    if (!k.discrete()) {
      for (Real z : {0.3, 0.8}) add(8, kind_point(k, {{"z", z}, {"a", 0.2}, {"b", 0.3}}));
    }
    for (int n = 0; n <= 4; ++n) add(9, kind_point(k, {{"z", 0.7}, {"n", Real(n)}}));
    add(10, kind_point(k, {{"z", 0.6}, {"a", 0.4}, {"b", 0.25}, {"r_s", 0.0}}));
    add(10, kind_point(k, {{"z", 0.6}, {"b", 0.25}, {"r_s", 1.0}}));
  }
}

void build_blpower(const QContext& ctx, Checks& out) {
  const std::vector<BranchedComplex> zs = {pos(0.4), pos(0.7), BranchedComplex(0.5, kPi / 6)};
  for (const auto& k : all_kinds(ctx, 1.3)) {
    for (const auto& z : zs) {
      for (int n = 0; n <= 3; ++n) {
        const ParamRecord p = with_q(with_z(kind_point(k, {{"n", Real(n)}}), z), ctx);
        out.push_back({"blpower", p, [k, z, n, p, ctx] {
                         const Complex lhs =
                             qlaplace(k, [n](Complex t) { return Real(n) * std::log(t); }, z, ctx);
                         const Complex rhs = std::exp(-detail::binom2(n) * ctx.ln_q()) * z.pow(Real(n));
                         return Reports{make_report("blpower", p, lhs, rhs, 1e-9)};
                       }});
      }
    }
  }
}

void build_sw(const QContext& ctx, Checks& out) {
  const std::vector<TransformKind> ks = {TransformKind::E(), TransformKind::Theta(), TransformKind::Discrete(0.7, ctx),
                                         TransformKind::Discrete(1.3, ctx)};
  for (const auto& k : ks) {
    for (int n = 0; n <= 6; ++n) {
      for (int m = 0; m <= 6; ++m) {
        const ParamRecord p = with_q(kind_point(k, {{"n", Real(n)}, {"m", Real(m)}}), ctx);
        out.push_back({"sw_orthogonality", p, [k, n, m, p, ctx] {
                         const Complex v = sw_orthogonality(k, n, m, ctx);
                         if (n != m) {
                           return Reports{make_report("sw_orthogonality", p, v, 0.0, 1e-10, "off-diagonal", 1.0)};
                         }
                         Real norm = std::pow(ctx.q(), n);
                         for (int j = 1; j <= n; ++j) norm *= 1.0 - std::pow(ctx.q(), j);
                         return Reports{make_report("sw_orthogonality", p, v, 1.0 / norm, 1e-8, "diagonal")};
                       }});
      }
    }
  }
}

// ---- U_q --------------------------------------------------------------------

void build_uq_crossrep(const QContext& ctx, Checks& out) {
  const std::vector<BranchedComplex> zs = {pos(0.2), pos(0.5), pos(1.0), BranchedComplex(0.5, kPi / 4)};
  for (Real a : {0.15, 0.3}) {
    for (Real b : {0.15, 0.3}) {
      for (const auto& z : zs) {
        for (const auto& k : all_kinds(ctx, 1.3)) {
          const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"b", b}}), z), ctx);
          out.push_back({"uq_crossrep", p, [=] {
                           const UqPoint up{a, b, z, k};
                           const auto methods = admissible_methods(up, ctx);
                           std::vector<Complex> vals;
                           for (UqMethod m : methods) vals.push_back(uq(up, m, ctx));
                           Reports rs;
                           for (std::size_t i = 0; i < methods.size(); ++i) {
                             for (std::size_t j = i + 1; j < methods.size(); ++j) {
                               rs.push_back(make_report("uq_crossrep", p, vals[i], vals[j], 1e-8,
                                                        std::string(to_string(methods[i])) + " vs " +
                                                            to_string(methods[j])));
                             }
                           }
                           return rs;
                         }});
        }
      }
    }
  }
}

VerificationReport residual_report(std::string id, const ParamRecord& p, const Residual& r, Real tol,
                                   std::string note) {
  return make_report(std::move(id), p, r.value, 0.0, tol, std::move(note), r.scale);
}

void build_uq_ode(const QContext& ctx, Checks& out) {
  const Complex a = 0.3, b = 0.2;
  for (const auto& k : all_kinds(ctx, 0.9)) {
    for (const auto& z : {pos(0.4), BranchedComplex(0.4, 2.0)}) {
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"b", b}}), z), ctx);
      out.push_back({"uq_ode", p, [=] {
                       Reports rs;
                       rs.push_back(residual_report("uq_ode", p, ode_residual(Solution::U, k, a, b, z, ctx), 1e-8, "U"));
                       rs.push_back(
                           residual_report("uq_ode", p, ode_residual(Solution::Y2, k, a, b, z, ctx), 1e-8, "y2"));
                       if (k.discrete()) {
                         for (KernelKind kappa : {KernelKind::E, KernelKind::Theta}) {
                           rs.push_back(residual_report("uq_wronskian", p, wronskian_residual(k, a, b, z, ctx, kappa),
                                                        1e-8, kappa == KernelKind::E ? "kappa = E" : "kappa = theta"));
                         }
                       } else {
                         rs.push_back(residual_report("uq_wronskian", p, wronskian_residual(k, a, b, z, ctx), 1e-8, ""));
                       }
                       return rs;
                     }});
    }
  }
  // Solutions at infinity need |q/(abz)| < 1.
  const BranchedComplex zi = pos(2.0 * ctx.q() / std::abs(a * b));
  const ParamRecord p = with_q(with_z({{"a", a}, {"b", b}}, zi), ctx);
  out.push_back({"uq_ode", p, [=] {
                   return Reports{
                       residual_report("uq_ode", p, ode_residual(Solution::Y3, TransformKind::E(), a, b, zi, ctx), 1e-8,
                                       "y3"),
                       residual_report("uq_ode", p, ode_residual(Solution::Y4, TransformKind::E(), a, b, zi, ctx), 1e-8,
                                       "y4")};
                 }});
}

void build_connection_infinity(const QContext& ctx, Checks& out) {
  const Complex a = 0.25, b = 0.15;
  const Real z0 = std::max(8.0, 2.5 * ctx.q() / std::abs(a * b));
  for (const auto& k : all_kinds(ctx, 1.1)) {
    for (const auto& z : {pos(z0), pos(2.0 * z0), BranchedComplex(2.0 * z0, 0.6)}) {
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"b", b}}), z), ctx);
      out.push_back({"connection_infinity", p, [=] {
                       return Reports{make_report("connection_infinity", p, connection_infinity(k, a, b, z, ctx),
                                                  uq(UqPoint{a, b, z, k}, ctx), 1e-7)};
                     }});
    }
  }
  const Complex alpha(0.3, 0.1);
  const Complex pa = std::exp(alpha * ctx.ln_q());
  for (const auto& z : {BranchedComplex::from_log(0.7 * ctx.ln_q()), BranchedComplex(1.7, -0.4)}) {
    const ParamRecord p = with_q(with_z({{"a", pa}}, z), ctx);
    out.push_back({"pk_forms", p, [=] {
                     const Complex t1 = pk_multiplier(PkForm::Theta1, pa, z, ctx);
                     return Reports{make_report("pk_forms", p, pk_multiplier(PkForm::E, pa, z, ctx),
                                                pk_multiplier(PkForm::E2, pa, z, ctx), 1e-10, "E and second E form of the multiplier"),
                                    make_report("pk_forms", p, t1, pk_multiplier(PkForm::Theta2, pa, z, ctx), 1e-10,
                                                "pKtheta1 vs pKtheta2"),
                                    make_report("pk_forms", p, t1, pk_multiplier(PkForm::Theta3, pa, z, ctx), 1e-10,
                                                "pKtheta1 vs pKtheta3")};
                   }});
  }
}

void build_connection_confluent(const QContext& ctx, Checks& out) {
  const Complex a = 0.25;
  for (int m = 0; m <= 2; ++m) {
    const Real z0 = std::max(8.0, 2.5 * std::pow(ctx.q(), 1 - m) / std::norm(a));
    for (const auto& k : all_kinds(ctx, 1.1)) {
      const BranchedComplex z = pos(z0);
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"m", Real(m)}}), z), ctx);
      out.push_back({"connection_confluent", p, [=] {
                       const auto r = connection_confluent(k, a, m, z, ctx);
                       const Complex u = uq(UqPoint{a, a * std::pow(ctx.q(), m), z, k}, ctx);
                       return Reports{make_report("connection_confluent", p, r.value, u, 1e-6)};
                     }});
    }
  }
}

// ---- Stokes -----------------------------------------------------------------

void build_stokes_differences(const QContext& ctx, Checks& out) {
  constexpr Real tol = 1e-6, floor = 1e-9;
  const Real q = ctx.q();
  const Complex a = 0.3, b = 0.2, lambda = 0.9;
  const auto disc = TransformKind::Discrete(lambda, ctx);
  const std::vector<BranchedComplex> zs = {pos(0.4), BranchedComplex(1.2, 0.7), BranchedComplex(0.25, -1.4)};
  for (const auto& z : zs) {
    const ParamRecord p = with_q(with_z({{"a", a}, {"b", b}, {"lambda", lambda}}, z), ctx);
    out.push_back({"uq_difference", p, [=] {
                     const Complex zv = z.value();
                     const Complex ut = uq({a, b, z, TransformKind::Theta()}, UqMethod::Borel, ctx);
                     const Complex ue = uq({a, b, z, TransformKind::E()}, UqMethod::Borel, ctx);
                     const Complex ul = uq({a, b, z, disc}, UqMethod::Borel, ctx);
                     const Complex second = k0(a, b, ctx) * qpoch_inf(a * b * zv, ctx) *
                                            phi21_zero(q / a, q / b, a * b * zv, ctx) / theta_q(-q * zv, ctx);
                     return Reports{floored_report("uq_difference.c", p, ut - ue, second * pqc(z, ctx), tol, floor),
                                    floored_report("uq_difference.d", p, ut - ul, second * pqd(z, lambda, ctx), tol,
                                                   floor)};
                   }});
  }
  for (Real c : {0.0, 0.3}) {
    const LogEntireFn log_S = [c, ctx](Complex t) { return c == 0.0 ? Complex(0.0) : log_qpoch_inf(-c * t, ctx); };
    for (const auto& z : {pos(0.4), BranchedComplex(0.9, 1.1), pos(q)}) {
      const ParamRecord p = with_q(with_z({{"S_c", c}, {"lambda", lambda}}, z), ctx);
      out.push_back({"cauchy_heine_difference", p, [=] {
                       const Complex th = cauchy_heine_reconstruct(log_S, z, ctx);
                       const Complex e = cauchy_heine_reconstruct(log_S, z, ctx, TransformKind::E());
                       const Complex l = cauchy_heine_reconstruct(log_S, z, ctx, disc);
                       const Complex s = std::exp(log_S(z.value()));
                       const std::string note = c == 0.0 ? "S = 1" : "S = (-c t;q)_inf";
                       VerificationReport rc = floored_report("cauchy_heine_difference.c", p, th - e,
                                                              s * stokes_ratio(StokesFn::C, z, ctx), tol, floor);
                       VerificationReport rd = floored_report("cauchy_heine_difference.d", p, th - l,
                                                              s * stokes_ratio(StokesFn::D, z, ctx, lambda), tol, floor);
                       rc.note += rc.note.empty() ? note : "; " + note;
                       rd.note += rd.note.empty() ? note : "; " + note;
                       return Reports{rc, rd};
                     }});
    }
  }
  for (int m : {0, 1}) {
    const ParamRecord p = with_q({{"m", Real(m)}, {"lambda", 0.8}}, ctx);
    out.push_back({"removable_limit", p, [=] {
                     const Real qm = std::pow(q, m);
                     const BranchedComplex hi = pos(qm * (1.0 + 1e-5)), lo = pos(qm * (1.0 - 1e-5));
                     auto near = [&](auto&& f) {
                       return 0.5 * (f(hi) / theta_q(-hi.value(), ctx) + f(lo) / theta_q(-lo.value(), ctx));
                     };
                     const Complex nc = near([&](const BranchedComplex& z) { return pqc(z, ctx); });
                     const Complex nd = near([&](const BranchedComplex& z) { return pqd(z, 0.8, ctx); });
                     const Complex d = removable_limit(StokesFn::D, m, ctx, 0.8);
                     return Reports{
                         make_report("removable_limit.c", p, removable_limit(StokesFn::C, m, ctx), nc, 1e-5,
                                     "near-point average at q^m (1 +- 1e-5)"),
                         make_report("removable_limit.d", p, d, nd, 1e-5, "near-point average at q^m (1 +- 1e-5)"),
                         make_report("removable_limit.d_forms", p, d,
                                     removable_limit(StokesFn::D, m, ctx, 0.8, LimitForm::Derivative), 1e-10,
                                     "lattice sum vs lambda d/dlambda form")};
                   }});
  }
}

void build_stokes_monodromy(const QContext& ctx, Checks& out) {
  for (const auto& z : {pos(0.5), BranchedComplex(1.3, 0.6)}) {
    const ParamRecord p = with_q(with_z({{"lambda", 0.8}}, z), ctx);
    out.push_back({"pq_stokes", p, [=] {
                     const auto jc = stokes_monodromy(StokesFn::C, z, ctx);
                     const auto jd = stokes_monodromy(StokesFn::D, z, ctx, 0.8);
                     return Reports{make_report("pq_stokes.c", p, jc.jump, jc.closed_form, 1e-6),
                                    make_report("pq_stokes.d", p, jd.jump, jd.closed_form, 1e-10)};
                   }});
  }
  const Complex a = 0.3, b = 0.2;
  const std::vector<std::pair<KernelKind, BranchedComplex>> cases = {
      {KernelKind::E, pos(0.5)}, {KernelKind::E, BranchedComplex(0.4, 0.7)}, {KernelKind::Theta, BranchedComplex(0.5, -kPi)}};
  for (const auto& [k, z] : cases) {
    const ParamRecord p = with_q(with_z({{"a", a}, {"b", b}, {"kind", k == KernelKind::E ? 0.0 : 1.0}}, z), ctx);
    out.push_back({"uq_monodromy", p, [k = k, z = z, p, a, b, ctx] {
                     const auto j = monodromy_jump(k, a, b, z, ctx);
                     return Reports{make_report("uq_monodromy", p, j.jump, j.closed_form, 1e-6)};
                   }});
  }
  identity_checks({{"monodromy_E", 1e-9}, {"monodromy_P", 1e-9}}, ctx, out);
}

// ---- bounds, recurrences, continued fraction ---------------------------------

void build_error_bounds(const QContext& ctx, Checks& out) {
  const Complex a = 0.3, b = 0.2;
  const Real M = estimate_Mq(a, b, ctx);
  std::vector<BranchedComplex> zs;
  for (Real r : {0.1, 0.3}) {
    for (Real arg : {0.0, 0.7, -0.7, 1.4, -1.4, 1.9, -1.9, 2.3, -2.3, 2.8}) zs.emplace_back(r, arg);
  }
  for (const auto& k : all_kinds(ctx, 0.9)) {
    for (const auto& z : zs) {
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"b", b}, {"M_q", M}}), z), ctx);
      out.push_back({"error_bound", p, [=] {
                       Reports rs;
                       for (int N = 5; N <= 12; ++N) {
                         const auto r = remainder_and_bound(k, a, b, z, N, ctx, M);
                         ParamRecord pn = p;
                         pn.set("N", Real(N));
                         rs.push_back(bound_report("error_bound", pn, std::abs(r.remainder), r.bound,
                                                   std::string("|R_N| <= bound, zone ") + to_string(r.zone)));
                       }
                       return rs;
                     }});
    }
  }
}

void build_recurrences_cf(const QContext& ctx, Checks& out) {
  const Real q = ctx.q();
  const Complex a = 0.3, b = 0.2;
  for (const auto& k : all_kinds(ctx, 0.9)) {
    for (const auto& z : {pos(0.4), BranchedComplex(0.6, 1.0)}) {
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", a}, {"b", b}}), z), ctx);
      out.push_back({"recurrence", p, [=] {
                       Reports rs;
                       const auto res = recurrence_residuals(k, a, b, z, ctx);
                       for (int i = 0; i < 3; ++i) {
                         rs.push_back(residual_report("recurrence", p, res[i], 1e-8, "relation " + std::to_string(i + 1)));
                       }
                       return rs;
                     }});
    }
  }
  const BranchedComplex z = pos(0.4);
  for (int n = 1; n <= 3; ++n) {
    const Complex at = std::pow(q, -n);
    for (const auto& k : all_kinds(ctx, 0.9)) {
      const ParamRecord p = with_q(with_z(kind_point(k, {{"a", at}, {"b", b}, {"n", Real(n)}}), z), ctx);
      out.push_back({"cf_terminating", p, [=] {
                       const auto g = cf_gap(at, b, z.value(), ctx);
                       const Complex target = cf_target(k, at, b, z, ctx);
                       return Reports{make_report("cf_terminating", p, g.even_limit, target, 1e-10, "even convergents"),
                                      make_report("cf_terminating", p, g.odd_limit, target, 1e-10, "odd convergents")};
                     }});
    }
  }
  const ParamRecord pg = with_q(with_z({{"a", a}, {"b", b}}, z), ctx);
  out.push_back({"cf_gap", pg, [=] {
                   const auto g = cf_gap(a, b, z.value(), ctx);
                   VerificationReport r = make_report("cf_gap", pg, g.even_limit, g.odd_limit, 0.0);
                   r.pass = g.stabilised && g.gap > 1e-6;
                   r.note = "even and odd limits differ; gap " + std::to_string(g.gap) + " after " +
                            std::to_string(g.n_used) + " convergents";
                   Reports rs{r};
                   for (const auto& k : all_kinds(ctx, 0.9)) {
                     const Complex target = cf_target(k, a, b, z, ctx);
                     const Real de = std::abs(g.even_limit - target), d_o = std::abs(g.odd_limit - target);
                     VerificationReport t = make_report("cf_limit_vs_U", kind_point(k, pg), g.even_limit, target, 0.0);
                     t.pass = de > 1e-6 && d_o > 1e-6;
                     char buf[96];
                     std::snprintf(buf, sizeof buf, "neither limit is the U ratio: |even - U| = %.9e, |odd - U| = %.9e",
                                   de, d_o);
                     t.note = buf;
                     rs.push_back(t);
                   }
                   return rs;
                 }});
}

// ---- appendix ---------------------------------------------------------------

// -1/ln q int_0^inf (1 - P_q(t)) t^n / theta_q(t) dt.
Complex uniform0_moment(int n, const QContext& ctx) {
  // 1 - P_q is periodic in ln t; if it rounds to zero over a period the
  // integrand vanishes identically in double precision.
  bool vanishes = true;
  for (int j = 0; j < 16 && vanishes; ++j) {
    const Real t = std::exp(ctx.ln_q() * j / 16.0);
    vanishes = 1.0 - p_q(pos(t), ctx) == Complex(0.0);
  }
  if (vanishes) return 0.0;
  auto g = [&](Complex t) {
    const Real r = std::abs(t);
    return std::log(1.0 - p_q(pos(r), ctx)) + Real(n + 1) * std::log(r) - std::log(-ctx.ln_q()) - log_theta_q(r, ctx);
  };
  QuadratureSpec spec;
  spec.abs_tol = 1e-13 * std::exp(-detail::binom2(n + 1) * ctx.ln_q());
  return integrate_ray(g, 0.0, 0.0, spec, ctx).value;
}

// pi^2/(a ln^2 q) sum_n z^{-w_n/ln q} / sin^2(pi w_n/ln q),  w_n = 2 n pi i + ln a.
Complex partfrac2b_lhs(Complex a, const BranchedComplex& z, const QContext& ctx) {
  const Real lq = ctx.ln_q();
  const Complex la = std::log(a);
  auto term = [&](int n) {
    const Complex w = (2.0 * kPi * kI * Real(n) + la) / lq;
    return std::exp(-w * z.log() + 2.0 * detail::log_inv_sin(kPi * w));
  };
  const Complex s = detail::bilateral_sum(term, ctx.eps() * 1e-4, ctx.max_terms()).value;
  return kPi * kPi / (a * lq * lq) * s;
}

// ln z/(a ln q) sum_n z^n/(1 - a q^n) + sum_n (qz)^n/(1 - a q^n)^2, q < |z| < 1.
Complex partfrac2b_rhs(Complex a, const BranchedComplex& z, const QContext& ctx) {
  const Real lq = ctx.ln_q();
  const Complex lz = z.log();
  auto t1 = [&](int n) { return std::exp(Real(n) * lz) / (1.0 - a * std::exp(n * lq)); };
  auto t2 = [&](int n) {
    const Complex d = 1.0 - a * std::exp(n * lq);
    return std::exp(Real(n) * (lq + lz)) / (d * d);
  };
  const Real tol = ctx.eps() * 1e-4;
  return lz / (a * lq) * detail::bilateral_sum(t1, tol, ctx.max_terms()).value +
         detail::bilateral_sum(t2, tol, ctx.max_terms()).value;
}

void build_appendix(const QContext& ctx, Checks& out) {
  const Real q = ctx.q(), lq = ctx.ln_q();
  for (int n = 0; n <= 2; ++n) {
    const ParamRecord p = with_q({{"n", Real(n)}}, ctx);
    out.push_back({"uniform0", p, [=] {
                     const Real scale = std::exp(-detail::binom2(n + 1) * lq);
                     return Reports{make_report("uniform0", p, uniform0_moment(n, ctx), 0.0, 1e-9,
                                                "|value| <= 1e-9 q^{-C(n+1,2)}", scale)};
                   }});
  }
  const std::vector<Complex> ss = {0.3, Complex(0.5, 0.2), 1.7, -0.4};
  const std::vector<BranchedComplex> zs = {pos(0.6), BranchedComplex(0.8, 0.5)};
  for (Complex s : ss) {
    for (const auto& z : zs) {
      const ParamRecord p = with_q(with_z({{"s", s}}, z), ctx);
      out.push_back({"blpower_general", p, [=] {
                       const Complex lhs =
                           qlaplace(TransformKind::Theta(), [s](Complex t) { return s * std::log(t); }, z, ctx);
                       const Complex rhs = -z.pow(s) / (std::pow(ctx.qq_inf(), 3) * lq) *
                                           std::exp(detail::log_inv_sin(kPi * s)) * kPi *
                                           theta_q(-std::exp((1.0 - s) * lq), ctx);
                       return Reports{make_report("blpower_general", p, lhs, rhs, 1e-8)};
                     }});
      for (Complex lambda : {Complex(0.7), Complex(1.3)}) {
        ParamRecord pl = p;
        pl.set("lambda", lambda);
        out.push_back({"blpower_lambda", pl, [=] {
                         const Complex zv = z.value();
                         const Complex lhs =
                             bilateral_lattice_sum([s](Complex t) { return s * std::log(t); }, lambda, zv, ctx).value;
                         const Complex rhs = std::exp(s * std::log(lambda)) *
                                             theta_q(lambda * std::exp(s * lq) / zv, ctx) / theta_q(lambda / zv, ctx);
                         return Reports{make_report("blpower_lambda", pl, lhs, rhs, 1e-8)};
                       }});
      }
    }
  }
  const Real sq = std::sqrt(q);
  for (Complex a : {Complex(sq), Complex(0.5 * (1.0 + q)), std::polar(sq, 0.5)}) {
    for (const auto& z : {pos(sq), BranchedComplex(std::pow(q, 0.3), 1.0), BranchedComplex(std::pow(q, 0.7), -2.0)}) {
      const ParamRecord p = with_q(with_z({{"a", a}}, z), ctx);
      out.push_back({"partfrac2b", p, [=] {
                       return Reports{make_report("partfrac2b", p, partfrac2b_lhs(a, z, ctx), partfrac2b_rhs(a, z, ctx),
                                                  1e-8)};
                     }});
    }
  }
}

struct SuiteEntry {
  SuiteInfo info;
  Builder build;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r = {
      {{"lemma21", "partial fractions, theta sums, elliptic, ab-symmetry, bridge, theta quotient", {0.1, 0.3, 0.5, 0.7}},
       build_lemma21},
      {{"pq_identities", "P_q representations, recurrence, normalisation, monodromy, kernel properties",
        {0.1, 0.3, 0.5, 0.7}},
       build_pq},
      {{"table1", "q-Laplace transform table rows 1-10", {0.5, 0.7}}, build_table1},
      {{"blpower", "monomials t^n map to q^{-C(n,2)} z^n under every kind", {0.3, 0.5}}, build_blpower},
      {{"sw_orthogonality", "Stieltjes-Wigert orthogonality under each measure", {0.5}}, build_sw},
      {{"uq_crossrep", "all admissible U_q representations agree pairwise", {0.3, 0.5}}, build_uq_crossrep},
      {{"uq_ode_wronskian", "q-difference equation and Wronskian residuals", {0.3, 0.5}}, build_uq_ode},
      {{"connection_infinity", "connection to the solutions at infinity and pK forms", {0.3}},
       build_connection_infinity},
      {{"connection_confluent", "confluent connection formula, b = a q^m", {0.3}}, build_connection_confluent},
      {{"stokes_differences", "differences of the theta, E and lambda resummations", {0.005, 0.01, 0.05}, true},
       build_stokes_differences},
      {{"stokes_monodromy", "monodromy of P^(c), P^(d), U^E and U^theta", {0.005, 0.01, 0.05}, true},
       build_stokes_monodromy},
      {{"error_bounds", "remainder bounds for the truncated 2phi0 series", {0.5}}, build_error_bounds},
      {{"recurrences_cf", "parameter-shift recurrences and the continued fraction", {0.5}}, build_recurrences_cf},
      {{"appendix", "uniform0 moments, general power kernels, two-parameter partial fractions", {0.05, 0.1, 0.3}}, build_appendix},
  };
  return r;
}

const SuiteEntry& find_entry(const std::string& id) {
  for (const auto& e : registry()) {
    if (e.info.id == id) return e;
  }
  throw Error(Errc::UnknownSuite, "no suite named '" + id + "'");
}

Reports run_check(const Check& c) {
  try {
    return c.run();
  } catch (const Error& e) {
    VerificationReport r;
    r.identity_id = c.label;
    r.point = c.point;
    r.abs_err = r.rel_err = std::numeric_limits<Real>::infinity();
    r.pass = false;
    r.note = e.what();
    return {r};
  }
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> s = [] {
    std::vector<SuiteInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return s;
}

const SuiteInfo& suite_info(const std::string& id) { return find_entry(id).info; }

SuiteResult run_suite(const std::string& id, const QContext& ctx, const SuiteOptions& options) {
  const SuiteEntry& entry = find_entry(id);
  SuiteResult result;
  result.id = id;

  std::vector<Real> grid = entry.info.q_grid;
  if (!options.q_grid.empty()) {
    grid.clear();
    for (Real q : options.q_grid) {
      if (entry.info.difference && q > kDifferenceQMax) {
        result.summary.notes.push_back("q = " + std::to_string(q) + " makes the differences smaller than double "
                                       "precision resolves; using q = " + std::to_string(kDifferenceQMax));
        q = kDifferenceQMax;
      }
      if (std::find(grid.begin(), grid.end(), q) == grid.end()) grid.push_back(q);
    }
  }

  Checks checks;
  for (Real q : grid) entry.build(QContext::make(q, ctx.eps(), ctx.max_terms()), checks);

  const std::size_t workers =
      std::min<std::size_t>(checks.size(), options.parallelism > 0 ? static_cast<std::size_t>(options.parallelism)
                                                                   : std::max(1u, std::thread::hardware_concurrency()));
  std::vector<Reports> per_check(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) per_check[i] = run_check(checks[i]);
  };
  std::vector<std::future<void>> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  auto& worst = result.summary.worst_rel;
  for (auto& reports : per_check) {
    for (auto& r : reports) {
      (r.pass ? result.summary.passed : result.summary.failed) += 1;
      auto it = std::find_if(worst.begin(), worst.end(), [&](const auto& w) { return w.first == r.identity_id; });
      if (it == worst.end()) {
        worst.emplace_back(r.identity_id, r.rel_err);
      } else {
        it->second = std::max(it->second, r.rel_err);
      }
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

}  // namespace qresum
