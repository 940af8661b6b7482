#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "qresum/identities.hpp"
#include "qresum/laplace.hpp"
#include "qresum/qcore.hpp"
#include "qresum/stokes.hpp"
#include "qresum/uq.hpp"

using namespace qresum;

namespace {

Real rel(Complex a, Complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

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

// P^(c)(z) = ln z/ln q + 1/ln q int_0^inf P(t) (1/(t+z) - 1/(t+1)) dt, by the
// trapezoid rule in ln t (the integrand decays exponentially at both ends).
Complex pqc_halfline_oracle(Complex z, const QContext& ctx) {
  const Real h = 0.01;
  Complex acc = 0.0;
  for (Real u = -60.0; u <= 60.0; u += h) {
    const Real t = std::exp(u);
    acc += p_q(pos(t), ctx) * (t / (t + z) - t / (t + 1.0));
  }
  return std::log(z) / ctx.ln_q() + acc * h / ctx.ln_q();
}

Complex log_one(Complex) { return 0.0; }

}  // namespace

TEST_CASE("P^(c): normalisation, reflection and q-periodicity") {
  const auto ctx = QContext::make(0.05);
  for (auto m : {PqcMethod::Series, PqcMethod::Integral}) {
    CHECK(std::abs(pqc(pos(1.0), ctx, m)) < 1e-15);
  }
  for (auto z : {pos(0.3), BranchedComplex(0.7, 1.2), BranchedComplex(2.5, -2.0)}) {
    const Complex p = pqc(z, ctx);
    CHECK(std::abs(p + pqc(z.inverse(), ctx)) <= 1e-12 * std::abs(p));
    CHECK(rel(pqc(z.scaled(0.05), ctx), p) < 1e-10);
  }
}

TEST_CASE("P^(c): Fourier series, finite integral and half-line integral agree") {
  const auto ctx = QContext::make(0.05);
  const Complex s = pqc(pos(0.42), ctx);
  const Complex i = pqc(pos(0.42), ctx, PqcMethod::Integral);
  CHECK(std::abs(s - i) < 1e-9 * std::max(1.0, std::abs(s)));
  CHECK(rel(s, i) < 1e-9);
  CHECK(std::abs(s.imag()) < 1e-18);

  for (Real q : {0.01, 0.05, 0.2}) {
    const auto c = QContext::make(q);
    for (auto z : {pos(0.42), pos(3.0), BranchedComplex(0.8, 1.0), BranchedComplex(1.7, -2.5)}) {
      CAPTURE(q);
      CAPTURE(z.arg());
      const Complex a = pqc(z, c);
      const Complex b = pqc(z, c, PqcMethod::Integral);
      CHECK(std::abs(a - b) < 1e-12 * std::max(1e-3, std::abs(a)));
    }
    const Complex o = pqc_halfline_oracle(0.42, c);
    CHECK(std::abs(o - pqc(pos(0.42), c)) < 1e-10 * std::max(1e-3, std::abs(o)));
  }
  CHECK(code_of([&] { pqc(BranchedComplex(0.5, kPi), ctx, PqcMethod::Integral); }) == Errc::ConstraintViolation);
}

TEST_CASE("P^(d): normalisation, lambda-periodicity and poles") {
  const auto ctx = QContext::make(0.3);
  CHECK(std::abs(pqd(pos(1.0), 0.7, ctx)) < 1e-15);
  for (Complex lambda : {Complex(0.7), Complex(1.3), Complex(0.5, 0.4)}) {
    for (auto z : {pos(0.4), BranchedComplex(2.0, 0.9)}) {
      const Complex p = pqd(z, lambda, ctx);
      CHECK(std::abs(pqd(z, 0.3 * lambda, ctx) - p) < 1e-11 * std::max(1.0, std::abs(p)));
      CHECK(std::abs(pqd(z.scaled(0.3), lambda, ctx) - p) < 1e-11 * std::max(1.0, std::abs(p)));
    }
  }
  CHECK(code_of([&] { pqd(pos(0.4), -0.3, ctx); }) == Errc::PoleAtParameter);
  CHECK(code_of([&] { pqd(pos(0.4), -0.4 * 0.09, ctx); }) == Errc::PoleAtParameter);
}

TEST_CASE("P^(d): log-derivative form and the two-parameter difference") {
  // At q = 0.6 qhat is about 2e-17, so P^(d) itself is far below the direct
  // log-derivative cancellation error; use q where it is resolvable.
  const auto ctx = QContext::make(0.05);
  for (Complex lambda : {Complex(0.7), Complex(0.4, 0.3)}) {
    for (Real z : {0.4, 2.2}) {
      const Complex direct = theta_q_logderiv(lambda, ctx) - theta_q_logderiv(lambda / z, ctx) +
                             std::log(z) / ctx.ln_q();
      CHECK(std::abs(pqd(pos(z), lambda, ctx) - direct) < 1e-11);
    }
  }

  const auto c3 = QContext::make(0.3);
  const Complex l1 = 0.7, l2 = 1.3;
  const Complex diff = pqd(pos(0.4), l1, c3) - pqd(pos(0.4), l2, c3);
  const Complex closed = pqd_difference_closed_form(0.4, l1, l2, c3);
  CHECK(std::abs(diff - closed) < 1e-10 * std::max(1.0, std::abs(closed)));
  CHECK(rel(diff, closed) < 1e-9);

  // The same closed form through the elliptic identity evaluator.
  const auto r = identity_eval("elliptic", ParamRecord{{"x", l1}, {"y", l2}, {"z", 0.4}}, c3);
  CHECK(r.pass);
  CHECK(rel(r.lhs, diff) < 1e-12);
  CHECK(rel(r.rhs, closed) < 1e-12);
}

TEST_CASE("Removable limits at z = q^m") {
  const auto ctx = QContext::make(0.05);
  for (int m : {-1, 0, 1, 2}) {
    CAPTURE(m);
    const Real qm = std::pow(0.05, m);
    const BranchedComplex near = pos(qm * (1.0 + 1e-5));
    const BranchedComplex lo = pos(qm * (1.0 - 1e-5));
    const Complex c = removable_limit(StokesFn::C, m, ctx);
    if (m == 0) CHECK(rel(c, pqc(near, ctx) / theta_q(-near.value(), ctx)) < 1e-5);
    // Symmetric nearby points cancel the first-order offset.
    CHECK(rel(c, 0.5 * (pqc(near, ctx) / theta_q(-near.value(), ctx) + pqc(lo, ctx) / theta_q(-lo.value(), ctx))) <
          1e-8);

    const Complex d = removable_limit(StokesFn::D, m, ctx, 0.8);
    CHECK(rel(d, removable_limit(StokesFn::D, m, ctx, 0.8, LimitForm::Derivative)) < 1e-10);
    const Complex avg = 0.5 * (pqd(near, 0.8, ctx) / theta_q(-near.value(), ctx) +
                               pqd(lo, 0.8, ctx) / theta_q(-lo.value(), ctx));
    CHECK(rel(d, avg) < 1e-8);

    CHECK(rel(removable_limit(StokesFn::C, m + 1, ctx) / c, -std::pow(0.05, m)) < 1e-12);
    CHECK(rel(removable_limit(StokesFn::D, m + 1, ctx, 0.8) / d, -std::pow(0.05, m)) < 1e-12);
  }
  CHECK(code_of([&] { removable_limit(StokesFn::D, 0, ctx, -0.05); }) == Errc::PoleAtParameter);
}

TEST_CASE("stokes_ratio switches to the limit inside the removable radius") {
  const auto ctx = QContext::make(0.05);
  const Complex lim = removable_limit(StokesFn::C, 1, ctx);
  CHECK(stokes_ratio(StokesFn::C, pos(0.05), ctx) == lim);
  CHECK(stokes_ratio(StokesFn::C, pos(0.05 * (1.0 + 5e-5)), ctx) == lim);
  CHECK(rel(stokes_ratio(StokesFn::C, pos(0.05 * (1.0 + 2e-4)), ctx), lim) < 1e-3);
  const Complex limd = removable_limit(StokesFn::D, 0, ctx, 0.8);
  CHECK(stokes_ratio(StokesFn::D, pos(1.0), ctx, 0.8) == limd);
  CHECK(rel(stokes_ratio(StokesFn::D, pos(1.0 - 2e-4), ctx, 0.8), limd) < 1e-3);
}

TEST_CASE("Monodromy of P^(c) and P^(d)") {
  const auto ctx = QContext::make(0.05);
  const auto jc = stokes_monodromy(StokesFn::C, pos(0.5), ctx);
  CHECK(std::abs(jc.jump - jc.closed_form) < 1e-9);
  CHECK(std::abs(jc.jump) > 1e-3);
  for (auto z : {BranchedComplex(1.3, 0.6), BranchedComplex(0.2, -1.0)}) {
    const auto j = stokes_monodromy(StokesFn::C, z, ctx);
    CHECK(std::abs(j.jump - j.closed_form) < 1e-9 * std::max(1.0, std::abs(j.jump)));
  }
  for (Complex lambda : {Complex(0.8), Complex(1.5, 0.5)}) {
    const auto jd = stokes_monodromy(StokesFn::D, BranchedComplex(0.5, 0.3), ctx, lambda);
    CHECK(std::abs(jd.jump - 2.0 * kPi * kI / ctx.ln_q()) < 1e-12);
    CHECK(jd.closed_form == 2.0 * kPi * kI / ctx.ln_q());
  }
  // The jump carries a factor 1/ln q and shrinks as q -> 0.
  Real prev = INFINITY;
  for (Real q : {0.3, 0.1, 0.05}) {
    const Real j = std::abs(stokes_monodromy(StokesFn::C, pos(0.5), QContext::make(q)).jump);
    CHECK(j < prev);
    prev = j;
  }
}

TEST_CASE("Growth hypothesis on S") {
  const auto ctx = QContext::make(0.05);
  CHECK_NOTHROW(check_growth(log_one, ctx));
  CHECK_NOTHROW(check_growth([&](Complex t) { return log_qpoch_inf(-0.3 * t, ctx); }, ctx));
  CHECK(code_of([&] { check_growth([](Complex t) { return t; }, ctx); }) == Errc::GrowthViolation);
  CHECK(code_of([&] { check_growth([&](Complex t) { return log_qpoch_inf(-3.0 * t, ctx); }, ctx); }) ==
        Errc::GrowthViolation);
  CHECK(code_of([&] { cauchy_heine_reconstruct([](Complex t) { return t; }, pos(0.4), ctx); }) ==
        Errc::GrowthViolation);
}

TEST_CASE("Cauchy-Heine integral with S = 1 is the theta transform of q/(q+t)") {
  for (Real q : {0.05, 0.3}) {
    const auto ctx = QContext::make(q);
    auto log_B = [&](Complex t) { return std::log(q / (q + t)); };
    for (auto z : {pos(0.4), BranchedComplex(1.5, 0.8)}) {
      const Complex ch = cauchy_heine_reconstruct(log_one, z, ctx);
      CHECK(rel(ch, qlaplace(TransformKind::Theta(), log_B, z, ctx)) < 1e-10);
      CHECK(rel(cauchy_heine_reconstruct(log_one, z, ctx, TransformKind::E()),
                qlaplace(TransformKind::E(), log_B, z, ctx)) < 1e-10);
      const auto disc = TransformKind::Discrete(0.9, ctx);
      CHECK(rel(cauchy_heine_reconstruct(log_one, z, ctx, disc), qlaplace(disc, log_B, z, ctx)) < 1e-10);
    }
  }
}

TEST_CASE("Differences of the three resummations from S") {
  std::vector<std::pair<const char*, Real>> probes = {{"S = 1", 0.0}, {"S = (-0.3t;q)_inf", 0.3}};
  for (Real q : {0.005, 0.01, 0.05}) {
    const auto ctx = QContext::make(q);
    const auto disc = TransformKind::Discrete(0.9, ctx);
    for (const auto& [name, c] : probes) {
      auto log_S = [&, c = c](Complex t) { return c == 0.0 ? Complex(0.0) : log_qpoch_inf(-c * t, ctx); };
      for (auto z : {pos(0.4), BranchedComplex(0.9, 1.1), BranchedComplex(3.0, -0.5)}) {
        CAPTURE(q);
        CAPTURE(name);
        CAPTURE(z.arg());
        const Complex th = cauchy_heine_reconstruct(log_S, z, ctx);
        const Complex e = cauchy_heine_reconstruct(log_S, z, ctx, TransformKind::E());
        const Complex l = cauchy_heine_reconstruct(log_S, z, ctx, disc);
        const Complex s = std::exp(log_S(z.value()));
        const Complex rc = s * pqc(z, ctx) / theta_q(-z.value(), ctx);
        const Complex rd = s * pqd(z, 0.9, ctx) / theta_q(-z.value(), ctx);
        if (std::abs(rc) > 1e-9) CHECK(rel(th - e, rc) < 1e-6);
        if (std::abs(rd) > 1e-9) CHECK(rel(th - l, rd) < 1e-6);
        CHECK(std::abs(th - e - rc) < 1e-12);
        CHECK(std::abs(th - l - rd) < 1e-12);
      }
      // At z = q the right side is S(q) times the removable limit.
      const Complex th = cauchy_heine_reconstruct(log_S, pos(q), ctx);
      const Complex s = std::exp(log_S(q));
      CHECK(rel(th - cauchy_heine_reconstruct(log_S, pos(q), ctx, TransformKind::E()),
                s * stokes_ratio(StokesFn::C, pos(q), ctx)) < 1e-5);
      CHECK(rel(th - cauchy_heine_reconstruct(log_S, pos(q), ctx, disc),
                s * stokes_ratio(StokesFn::D, pos(q), ctx, 0.9)) < 1e-5);
    }
  }
}

TEST_CASE("Differences of the q-Kummer resummations") {
  const Complex a = 0.3, b = 0.2;
  for (Real q : {0.005, 0.01, 0.05}) {
    const auto ctx = QContext::make(q);
    const auto disc = TransformKind::Discrete(0.9, ctx);
    for (auto z : {pos(0.4), BranchedComplex(1.2, 0.7), BranchedComplex(0.25, -1.4)}) {
      CAPTURE(q);
      CAPTURE(z.arg());
      const Complex zv = z.value();
      const Complex ut = uq({a, b, z, TransformKind::Theta()}, UqMethod::Borel, ctx);
      const Complex ue = uq({a, b, z, TransformKind::E()}, UqMethod::Borel, ctx);
      const Complex ul = uq({a, b, z, disc}, UqMethod::Borel, ctx);
      const Complex second = k0(a, b, ctx) * qpoch_inf(a * b * zv, ctx) * phi21_zero(q / a, q / b, a * b * zv, ctx) /
                             theta_q(-q * zv, ctx);
      const Complex rc = second * pqc(z, ctx);
      const Complex rd = second * pqd(z, 0.9, ctx);
      if (std::abs(rc) > 1e-8) CHECK(rel(ut - ue, rc) < 1e-6);
      if (std::abs(rd) > 1e-8) CHECK(rel(ut - ul, rd) < 1e-6);
    }
  }
}
