#include <cmath>
#include <vector>

#include "doctest.h"
#include "qresum/qcore.hpp"
#include "qresum/quad.hpp"
#include "qresum/series.hpp"
#include "qresum/uq.hpp"

using namespace qresum;

namespace {

Real rel(Complex a, Complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<TransformKind> kinds(const QContext& ctx, Complex lambda = 1.3) {
  return {TransformKind::E(), TransformKind::Theta(), TransformKind::Discrete(lambda, ctx)};
}

BranchedComplex pos(Real x) { return BranchedComplex::positive(x); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::OutOfRange;
}

// n-th term of the 2phi0 series, from the definition.
Complex phi20_term(Complex a, Complex b, Complex z, int n, Real q) {
  Complex t = 1.0;
  for (int k = 0; k < n; ++k) t *= (1.0 - a * std::pow(q, k)) * (1.0 - b * std::pow(q, k)) / (1.0 - std::pow(q, k + 1));
  return t * std::pow(q, -0.5 * n * (n - 1.0)) * std::pow(-z, Real(n));
}

}  // namespace

TEST_CASE("all admissible representations agree on the standard grid") {
  for (Real q : {0.3, 0.5}) {
    const auto ctx = make_context(q);
    for (Real a : {0.15, 0.3}) {
      for (Real b : {0.15, 0.3}) {
        for (BranchedComplex z : {pos(0.2), pos(0.5), pos(1.0), BranchedComplex(0.5, kPi / 4)}) {
          for (const auto& k : kinds(ctx)) {
            const UqPoint p{a, b, z, k};
            const auto methods = admissible_methods(p, ctx);
            CHECK(methods.size() == 6);
            const Complex ref = uq(p, UqMethod::Symmetric, ctx);
            for (UqMethod m : methods) {
              const Complex v = uq(p, m, ctx);
              CHECK_MESSAGE(rel(v, ref) < 1e-8, "q=", q, " a=", a, " b=", b, " kind=", k.name(), " method=",
                            to_string(m));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("representations agree past the Stokes line") {
  const auto ctx = make_context(0.5);
  for (const auto& k : kinds(ctx)) {
    const UqPoint p{0.3, 0.2, BranchedComplex(0.5, 2.5), k};
    const Complex ref = uq(p, UqMethod::Phi11, ctx);
    for (UqMethod m : admissible_methods(p, ctx)) CHECK(rel(uq(p, m, ctx), ref) < 1e-8);
  }
}

TEST_CASE("symmetric and Mellin-Barnes forms agree at the default point") {
  const auto ctx = make_context(0.5);
  const UqPoint p{0.3, 0.2, pos(0.4), TransformKind::E()};
  CHECK(rel(uq(p, UqMethod::Symmetric, ctx), uq(p, UqMethod::MellinBarnes, ctx)) < 1e-8);
}

TEST_CASE("terminating parameters give a polynomial") {
  const Real q = 0.5;
  const auto ctx = make_context(q);
  const Complex a = 1.0 / q, b = 0.2;
  for (Real z : {0.4, 1.7}) {
    for (const auto& k : kinds(ctx)) {
      const UqPoint p{a, b, pos(z), k};
      const auto methods = admissible_methods(p, ctx);
      CHECK(methods == std::vector<UqMethod>{UqMethod::Borel, UqMethod::Phi11, UqMethod::Symmetric});
      for (UqMethod m : methods) CHECK(rel(uq(p, m, ctx), 1.0 + (1.0 - b) * z / q) < 1e-12);
      CHECK_THROWS_AS(uq(p, UqMethod::MellinBarnes, ctx), Error);
    }
  }
}

TEST_CASE("representation constraints are enforced") {
  const auto ctx = make_context(0.5);
  CHECK(code_of([&] { uq(UqPoint{0.9, 0.8, pos(3.0), TransformKind::E()}, UqMethod::Symmetric, ctx); }) ==
        Errc::ConstraintViolation);
  CHECK(code_of([&] { uq(UqPoint{3.0, 0.2, pos(0.3), TransformKind::E()}, UqMethod::Poch, ctx); }) ==
        Errc::ConstraintViolation);
  CHECK(code_of([&] { uq(UqPoint{1.5, 0.2, pos(0.3), TransformKind::E()}, UqMethod::CauchyHeine, ctx); }) ==
        Errc::ConstraintViolation);
  const auto lam = TransformKind::Discrete(0.9, ctx);
  CHECK(code_of([&] { uq(UqPoint{0.3, 0.2, BranchedComplex::principal(-0.9 * 0.25), lam}, ctx); }) ==
        Errc::PoleAtLattice);
  CHECK(uq_method_from_string("cauchy_heine") == UqMethod::CauchyHeine);
  CHECK_THROWS_AS(uq_method_from_string("laplace"), Error);
}

TEST_CASE("U is asymptotic to its 2phi0 series") {
  const Real q = 0.5;
  const auto ctx = make_context(q);
  const Complex a = 0.3, b = 0.2;
  for (const auto& k : kinds(ctx)) {
    for (BranchedComplex z : {pos(0.1), pos(0.05), BranchedComplex(0.08, 1.0)}) {
      const Complex u = uq(UqPoint{a, b, z, k}, ctx);
      for (int N = 1; N <= 8; ++N) {
        const Complex r = u - phi20_partial_sum(a, b, z, N, ctx);
        CHECK(std::abs(r) <= 2.0 * std::abs(phi20_term(a, b, z.value(), N, q)));
      }
    }
  }
}

TEST_CASE("second solution: both forms and the kernel bridge") {
  const Real q = 0.5;
  const auto ctx = make_context(q);
  const Complex a = 0.3, b = 0.2;
  const auto z = pos(0.4);
  for (KernelKind k : {KernelKind::E, KernelKind::Theta}) {
    CHECK(rel(y2(k, a, b, z, ctx, 0), y2(k, a, b, z, ctx, 1)) < 1e-10);
  }
  const Complex ratio = y2(KernelKind::E, a, b, z, ctx) / y2(KernelKind::Theta, a, b, z, ctx);
  CHECK(rel(ratio, p_q(z.scaled(q).rotated(kPi), ctx)) < 1e-10);
  // The 2phi1 form stops at |abz| = 1; the 1phi1 form continues past it.
  const Real z0 = 1.0 / (0.3 * 0.2);
  CHECK(code_of([&] { y2(KernelKind::E, a, b, pos(z0), ctx, 0); }) == Errc::DivergentSeries);
  CHECK(std::isfinite(std::abs(y2(KernelKind::E, a, b, pos(z0), ctx, 1))));
}

TEST_CASE("solutions at infinity") {
  const auto ctx = make_context(0.5);
  const Complex a = 0.3, b = 0.2;
  const auto z = pos(10.0);
  CHECK(rel(y_infinity(3, a, b, z, ctx), y_infinity(4, b, a, z, ctx)) < 1e-15);
  // Direct partial sums of 2phi1(a,0;aq/b;q,x); x = 5/6 here.
  const Real q = 0.5;
  const Complex x = q / (a * b * 10.0), c = a * q / b;
  Complex term = 1.0, sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    sum += term;
    term *= (1.0 - a * std::pow(q, n)) / ((1.0 - c * std::pow(q, n)) * (1.0 - std::pow(q, n + 1))) * x;
  }
  CHECK(std::abs(term) < 1e-14);
  CHECK(rel(y_infinity(3, a, b, z, ctx), std::pow(10.0, -std::log(0.3) / std::log(q)) * sum) < 1e-13);
  CHECK(code_of([&] { y_infinity(3, a, b, pos(2.0), ctx); }) == Errc::DivergentSeries);
  CHECK(code_of([&] { y_infinity(3, 0.3, 0.3 * q * q, z, ctx); }) == Errc::PoleAtParameter);
}

TEST_CASE("every solution satisfies the q-difference equation") {
  const auto ctx = make_context(0.5);
  const Complex a = 0.3, b = 0.2;
  for (const auto& k : kinds(ctx)) {
    CHECK(ode_residual(Solution::U, k, a, b, pos(0.4), ctx).relative() < 1e-8);
    CHECK(ode_residual(Solution::U, k, a, b, BranchedComplex(0.4, 2.0), ctx).relative() < 1e-8);
  }
  CHECK(ode_residual(Solution::Y2, TransformKind::E(), a, b, pos(0.4), ctx).relative() < 1e-8);
  CHECK(ode_residual(Solution::Y2, TransformKind::Theta(), a, b, pos(0.4), ctx).relative() < 1e-8);
  CHECK(ode_residual(Solution::Y3, TransformKind::E(), a, b, pos(10.0), ctx).relative() < 1e-8);
  CHECK(ode_residual(Solution::Y4, TransformKind::E(), a, b, pos(10.0), ctx).relative() < 1e-8);
}

TEST_CASE("Wronskian relation") {
  const auto ctx = make_context(0.5);
  const Complex a = 0.3, b = 0.2;
  CHECK(wronskian_residual(TransformKind::E(), a, b, pos(0.4), ctx).relative() < 1e-8);
  CHECK(wronskian_residual(TransformKind::Theta(), a, b, pos(0.4), ctx).relative() < 1e-8);
  const auto lam = TransformKind::Discrete(0.9, ctx);
  CHECK(wronskian_residual(lam, a, b, pos(0.4), ctx, KernelKind::Theta).relative() < 1e-8);
  CHECK(wronskian_residual(lam, a, b, pos(0.4), ctx, KernelKind::E).relative() < 1e-8);
  CHECK(wronskian_residual(TransformKind::E(), 2.0, b, pos(0.4), ctx).relative() < 1e-12);
}

TEST_CASE("monodromy around the origin") {
  const auto ctx = make_context(0.01);
  const Complex a = 0.3, b = 0.2;
  const auto jE = monodromy_jump(KernelKind::E, a, b, pos(0.5), ctx);
  CHECK(rel(jE.jump, jE.closed_form) < 1e-6);
  const Complex scale = ctx.c_q() * e_q(BranchedComplex(0.01 * 0.5, kPi), ctx);
  const Real ratio = std::abs(jE.jump) / std::abs(scale);
  CHECK(ratio > 1e-3);
  CHECK(ratio < 1e3);
  const auto jT = monodromy_jump(KernelKind::Theta, a, b, BranchedComplex(0.5, -kPi), ctx);
  CHECK(rel(jT.jump, jT.closed_form) < 1e-6);
  CHECK_THROWS_AS(monodromy_jump(KernelKind::Theta, a, b, pos(0.5), ctx), Error);
  const auto c5 = make_context(0.5);
  const auto j5 = monodromy_jump(KernelKind::E, a, b, BranchedComplex(0.4, 0.7), c5);
  CHECK(rel(j5.jump, j5.closed_form) < 1e-8);
}

TEST_CASE("connection multipliers: alternative forms agree") {
  const auto ctx = make_context(0.2);
  const Complex alpha(0.3, 0.1);
  const Complex a = std::exp(alpha * ctx.ln_q());
  const auto z = BranchedComplex::from_log(0.7 * ctx.ln_q());
  const Complex pE = pk_multiplier(PkForm::E, a, z, ctx);
  CHECK(rel(pE, pk_multiplier(PkForm::E2, a, z, ctx)) < 1e-10);
  const Complex pT = pk_multiplier(PkForm::Theta1, a, z, ctx);
  CHECK(rel(pT, pk_multiplier(PkForm::Theta3, a, z, ctx)) < 1e-10);
  CHECK(rel(pT, pk_multiplier(PkForm::Theta2, a, z, ctx)) < 1e-10);
  CHECK(rel(pk_multiplier(PkForm::Lambda, 1.0, z, ctx, 1.1), 1.0) < 1e-14);
  // q-periodic in z.
  CHECK(rel(pk_multiplier(PkForm::E, a, z.scaled(ctx.q()), ctx), pE) < 1e-10);
  CHECK(rel(pk_multiplier(PkForm::Theta1, a, z.scaled(ctx.q()), ctx), pT) < 1e-10);
}

TEST_CASE("connection formula at infinity") {
  const auto ctx = make_context(0.3);
  const Complex a = 0.25, b = 0.15;
  CHECK(code_of([&] { connection_infinity(TransformKind::E(), a, b, pos(8.0), ctx); }) == Errc::DivergentSeries);
  for (const auto& k : kinds(ctx, 1.1)) {
    for (Real z : {12.0, 40.0}) {
      const Complex u = uq(UqPoint{a, b, pos(z), k}, ctx);
      CHECK_MESSAGE(rel(connection_infinity(k, a, b, pos(z), ctx), u) < 1e-7, k.name(), " z=", z);
      CHECK(std::abs(pk_multiplier(k, a, pos(z), ctx) - 1.0) < 0.5);
    }
  }
  CHECK_THROWS_AS(connection_infinity(TransformKind::E(), a, a * 0.09, pos(40.0), ctx), Error);
}

TEST_CASE("confluent connection formula") {
  const Real q = 0.3;
  const auto ctx = make_context(q);
  const Complex a = 0.25;
  for (const auto& k : kinds(ctx, 1.1)) {
    const auto r0 = connection_confluent(k, a, 0, pos(8.0), ctx);
    CHECK(rel(r0.value, uq(UqPoint{a, a, pos(8.0), k}, ctx)) < 1e-6);
    const auto r1 = connection_confluent(k, a, 1, pos(40.0), ctx);
    CHECK(rel(r1.value, uq(UqPoint{a, a * q, pos(40.0), k}, ctx)) < 1e-6);
  }
  CHECK_THROWS_AS(connection_confluent(TransformKind::E(), a, -1, pos(8.0), ctx), Error);
}

TEST_CASE("remainder bounds in the half-plane and sectors") {
  const auto ctx = make_context(0.5);
  const Complex a = 0.3, b = 0.2;
  const Real M = estimate_Mq(a, b, ctx);
  for (const auto& k : kinds(ctx, 0.9)) {
    for (BranchedComplex z : {pos(0.4), BranchedComplex(0.3, 1.2), BranchedComplex(0.3, -kPi / 2)}) {
      for (int N = 5; N <= 12; ++N) {
        const auto r = remainder_and_bound(k, a, b, z, N, ctx, M);
        CHECK(r.zone == BoundZone::HalfPlane);
        CHECK(std::abs(r.remainder) <= r.bound);
      }
    }
    for (BranchedComplex z : {BranchedComplex(0.3, 3 * kPi / 4), BranchedComplex(0.3, -2.8)}) {
      for (int N = 1; N <= 10; ++N) {
        const auto r = remainder_and_bound(k, a, b, z, N, ctx, M);
        CHECK(r.zone != BoundZone::HalfPlane);
        CHECK(std::abs(r.remainder) <= r.bound);
      }
    }
  }
  const auto plain = remainder_and_bound(TransformKind::E(), a, b, pos(0.3), 4, ctx, M);
  const auto sector = remainder_and_bound(TransformKind::E(), a, b, BranchedComplex(0.3, 3 * kPi / 4), 4, ctx, M);
  CHECK(sector.zone == BoundZone::SectorE);
  CHECK(rel(sector.bound / plain.bound, std::exp(-(kPi / 4) * (kPi / 4) / (2.0 * ctx.ln_q()))) < 1e-12);
  CHECK(code_of([&] { remainder_and_bound(TransformKind::E(), a, b, pos(0.3), 0, ctx, M); }) == Errc::InvalidN);
  CHECK_THROWS_AS(remainder_and_bound(TransformKind::Discrete(-0.7, ctx), a, b, pos(0.3), 4, ctx, M), Error);
}

TEST_CASE("M_q estimate") {
  const auto ctx = make_context(0.5);
  const Real m = estimate_Mq(0.3, 0.2, ctx);
  CHECK(m > 0.0);
  CHECK(std::isfinite(m));
  const Real fine = estimate_Mq(0.3, 0.2, ctx, 481, 24);
  CHECK(std::abs(fine - m) <= 0.05 * m);
  CHECK(fine >= m / 1.25);
  const Real zero = estimate_Mq(0.0, 0.0, ctx);
  CHECK(std::isfinite(zero));
  CHECK(zero >= 1.25 * std::abs(u_function(0.0, 0.0, 1.0, ctx)));
}

TEST_CASE("parameter-shift recurrences") {
  const auto ctx = make_context(0.5);
  const auto z = pos(0.4);
  for (const auto& r : recurrence_residuals(TransformKind::E(), 0.3, 0.2, z, ctx)) CHECK(r.relative() < 1e-8);
  const auto same = recurrence_residuals(TransformKind::Theta(), 0.3, 0.3, z, ctx);
  CHECK(same[1].relative() < 1e-8);
  const auto lam = recurrence_residuals(TransformKind::Discrete(0.9, ctx), 0.3, 0.2, z, ctx);
  CHECK(lam[2].relative() < 1e-8);
}

TEST_CASE("continued fraction") {
  const Real q = 0.5;
  const auto ctx = make_context(q);
  const Complex a = 0.3, b = 0.2, z = 0.4;
  CHECK(rel(cf_convergent(1, a, b, z, ctx), 1.0 + (1.0 - a) * z / q) < 1e-15);
  CHECK(rel(cf_convergent(2, a, b, z, ctx), 1.0 + (1.0 - a) * z / q / (1.0 + (1.0 - b * q) * z / (q * q))) < 1e-15);

  const auto gap = cf_gap(a, b, z, ctx);
  CHECK(gap.stabilised);
  CHECK(gap.gap > 1e-6);
  for (const auto& k : kinds(ctx, 0.9)) {
    const Complex target = cf_target(k, a, b, pos(0.4), ctx);
    CHECK(std::abs(gap.even_limit - target) > 1e-6);
    CHECK(std::abs(gap.odd_limit - target) > 1e-6);
  }
  for (int n = 1; n <= 3; ++n) {
    const Complex at = std::pow(q, -n);
    const auto t = cf_gap(at, b, z, ctx);
    CHECK(t.stabilised);
    for (const auto& k : kinds(ctx, 0.9)) {
      CHECK(rel(t.even_limit, cf_target(k, at, b, pos(0.4), ctx)) < 1e-10);
      CHECK(rel(t.odd_limit, cf_target(k, at, b, pos(0.4), ctx)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(cf_convergent(201, a, b, z, ctx), Error);
  // alpha_3 z = -1 makes the innermost tail vanish.
  CHECK(code_of([&] { cf_convergent(3, a, b, -q * q * q / (1.0 - a * q), ctx); }) == Errc::ZeroDivision);
}
