#include <cmath>

#include "doctest.h"
#include "qresum/identities.hpp"
#include "qresum/qcore.hpp"

using namespace qresum;

namespace {

Real rel(Complex a, Complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

Complex brute_qpoch(Complex a, Real q, int n) {
  Complex p = 1.0;
  for (int k = 0; k < n; ++k) p *= 1.0 - a * std::pow(q, k);
  return p;
}

// Bilateral series in long double; keeps digits where the terms cancel.
Complex theta_series_ld(Complex tau, Real q) {
  using LC = std::complex<long double>;
  const LC t(tau.real(), tau.imag());
  LC up = 0.0L, down = 0.0L, tn = 1.0L;
  long double qn = 1.0L;  // q^{n(n-1)/2} for n >= 0
  for (int n = 0; n < 400; ++n) {
    up += qn * tn;
    tn *= t;
    qn *= std::pow(static_cast<long double>(q), static_cast<long double>(n));
  }
  LC ti = 1.0L / t, tm = ti;
  long double qm = static_cast<long double>(q);  // q^{n(n-1)/2} at n = -1
  for (int k = 1; k < 400; ++k) {
    down += qm * tm;
    tm *= ti;
    qm *= std::pow(static_cast<long double>(q), static_cast<long double>(k + 1));
  }
  const LC s = up + down;
  return {static_cast<Real>(s.real()), static_cast<Real>(s.imag())};
}

}  // namespace

TEST_CASE("context constants") {
  const auto ctx = make_context(0.5);
  CHECK(ctx.ln_q() == doctest::Approx(-0.693147).epsilon(1e-6));
  CHECK(ctx.c_q() == doctest::Approx(1.0 / std::sqrt(2.0 * kPi * 0.6931471805599453)).epsilon(1e-14));
  CHECK(ctx.q_hat() == doctest::Approx(std::exp(2.0 * kPi * kPi / std::log(0.5))).epsilon(1e-14));
  CHECK(ctx.qq_inf() == doctest::Approx(brute_qpoch(0.5, 0.5, 200).real()).epsilon(1e-14));
  CHECK_THROWS_AS(make_context(1.0), Error);
  CHECK_THROWS_AS(make_context(0.0), Error);
  CHECK_THROWS_AS(make_context(NAN), Error);
  CHECK_THROWS_AS(make_context(0.5, -1.0), Error);
  CHECK_THROWS_AS(make_context(0.5, 1e-12, 10), Error);
  try {
    make_context(1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OutOfRange);
  }
}

TEST_CASE("branched complex keeps the sheet") {
  const auto z = BranchedComplex::principal({-1.0, 1e-300});
  CHECK(z.arg() == doctest::Approx(kPi));
  const auto w = z.rotated(2.0 * kPi);
  CHECK(std::abs(w.value() - z.value()) < 1e-15);
  CHECK(w.log().imag() == doctest::Approx(3.0 * kPi));
  CHECK_THROWS_AS(BranchedComplex(0.0, 0.0), Error);
  const auto p = BranchedComplex(2.0, 1.0) * BranchedComplex(3.0, 7.0);
  CHECK(p.modulus() == doctest::Approx(6.0));
  CHECK(p.arg() == doctest::Approx(8.0));
}

TEST_CASE("q-Pochhammer symbols") {
  const auto ctx = make_context(0.5);
  CHECK(qpoch_inf(0.0, ctx) == Complex(1.0));
  CHECK(qpoch_inf(1.0, ctx) == Complex(0.0));
  CHECK(qpoch_inf(4.0, ctx) == Complex(0.0));
  CHECK(rel(qpoch_inf(0.5, ctx), brute_qpoch(0.5, 0.5, 200)) < 1e-13);
  for (Complex a : {Complex(0.3, 0.4), Complex(-2.7, 0.1), Complex(12.0, -3.0), Complex(-0.9)}) {
    CHECK(rel(qpoch_inf(a, ctx), brute_qpoch(a, 0.5, 200)) < 1e-13);
  }
  CHECK(qpoch(0.7, 0.0, ctx) == Complex(1.0));
  CHECK(rel(qpoch({0.3, 0.2}, 1.0, ctx), Complex(0.7, -0.2)) < 1e-15);
  CHECK(rel(qpoch(0.3, -1.0, ctx), 1.0 / (1.0 - 0.6)) < 1e-15);
  CHECK(rel(qpoch(0.3, 4.0, ctx), brute_qpoch(0.3, 0.5, 4)) < 1e-15);
  // Non-integer index through the ratio of infinite products.
  const Complex nu{0.4, 0.3};
  CHECK(rel(qpoch(0.3, nu, ctx) * qpoch_inf(0.3 * std::exp(nu * ctx.ln_q()), ctx), qpoch_inf(0.3, ctx)) < 1e-14);
  CHECK_THROWS_AS(qpoch(0.3, std::log(1.0 / 0.3) / std::log(0.5) * Complex(1.0), ctx), Error);
  CHECK_THROWS_AS(qpoch(0.5, -1.0, ctx), Error);
}

TEST_CASE("theta_q triple product agrees with the bilateral series") {
  for (Real q : {0.1, 0.3, 0.5, 0.7}) {
    const auto ctx = make_context(q);
    Real worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const Real r = q + (1.0 - q) * (i + 0.5) / 10.0;
        const Complex tau = std::polar(r, -kPi + 2.0 * kPi * (j + 0.5) / 10.0);
        worst = std::max(worst, rel(theta_q(tau, ctx), theta_series_ld(tau, q)));
      }
    }
    CHECK(worst < 1e-12);
    // Points outside the annulus exercise the rescaling.
    for (Complex tau : {Complex(7.3, 1.0), Complex(0.01, -0.02), Complex(-27.0, 9.0)}) {
      CHECK(rel(theta_q(tau, ctx), theta_series_ld(tau, q)) < 1e-12);
    }
  }
  const auto ctx = make_context(0.5);
  CHECK(theta_q(BranchedComplex(1.0, kPi), ctx) == Complex(0.0));
  CHECK(theta_q(Complex(-0.25), ctx) == Complex(0.0));
  CHECK(theta_q(BranchedComplex(0.7, 0.3), ctx) == theta_q(BranchedComplex(0.7, 0.3 + 2.0 * kPi), ctx));
}

TEST_CASE("double-precision series stays close away from zeros") {
  const auto ctx = make_context(0.3);
  for (Complex tau : {Complex(0.5, 0.2), Complex(0.9), Complex(0.35, -0.1)}) {
    CHECK(rel(theta_q_series(tau, ctx), theta_series_ld(tau, 0.3)) < 1e-14);
  }
}

TEST_CASE("quasi-periodicity of both kernels") {
  for (Real q : {0.1, 0.5}) {
    const auto ctx = make_context(q);
    const Complex tau{0.45, 0.2};
    CHECK(rel(theta_q(q * tau, ctx) * tau, theta_q(tau, ctx)) < 1e-13);
    for (const auto& p : identity_default_grid("quasi_periodicity", ctx)) {
      const auto r = identity_eval("quasi_periodicity", p, ctx, 1e-12);
      CHECK_MESSAGE(r.pass, r.note, " rel_err=", r.rel_err);
    }
  }
}

TEST_CASE("log-derivative of theta_q") {
  const auto ctx = make_context(0.5);
  for (Complex x : {Complex(0.3), Complex(0.7), Complex(3.1, 0.4), Complex(-0.2, 0.05), Complex(0.02, 0.01)}) {
    CHECK(rel(theta_q_logderiv(x, ctx), theta_q_logderiv_series(x, ctx)) < 1e-12);
    const Real h = 1e-6;
    const Complex fd = (theta_q_logderiv(x + h, ctx) - theta_q_logderiv(x - h, ctx)) / (2.0 * h);
    CHECK(rel(theta_q_logderiv_prime(x, ctx), fd) < 1e-7);
  }
  for (Complex x : {Complex(0.3), Complex(3.1, 0.4), Complex(-0.2, 0.05)}) {
    const auto b = BranchedComplex::principal(x);
    const Complex split = -b.log() / ctx.ln_q() + 0.5 + theta_q_logderiv_periodic(b, ctx);
    CHECK(rel(theta_q_logderiv(x, ctx), split) < 1e-12);
  }
  // L(q w) = L(w) - 1
  const Complex w{0.8, 0.3};
  CHECK(std::abs(theta_q_logderiv(0.5 * w, ctx) - theta_q_logderiv(w, ctx) + 1.0) < 1e-12);
  CHECK_THROWS_AS(theta_q_logderiv(Complex(-0.5), ctx), Error);
  CHECK_THROWS_AS(theta_q_logderiv(Complex(-4.0), ctx), Error);

  // Partial-fraction oracle for the difference at (0.3, 0.7).
  Complex oracle = 0.0;
  for (int n = -80; n <= 80; ++n) {
    const Real qn = std::pow(0.5, n);
    oracle += 0.3 / (0.3 + qn) - 0.7 / (0.7 + qn);
  }
  CHECK(std::abs(theta_q_logderiv(0.3, ctx) - theta_q_logderiv(0.7, ctx) - oracle) < 1e-11);
}

TEST_CASE("E_q special values") {
  const auto ctx = make_context(0.3);
  const Real q = ctx.q();
  CHECK(rel(e_q(BranchedComplex::positive(std::sqrt(q)), ctx), 1.0) < 1e-15);
  CHECK(rel(e_q(BranchedComplex::positive(q * q), ctx), std::pow(q, 9.0 / 8.0)) < 1e-14);
  for (Real x : {-1.3, 0.2, 2.5}) {
    CHECK(rel(e_q(BranchedComplex::positive(std::pow(q, x)), ctx), std::pow(q, 0.5 * (x - 0.5) * (x - 0.5))) < 1e-13);
  }
  const auto tau = BranchedComplex::positive(0.37);
  CHECK(rel(e_q(tau.inverse(), ctx), 0.37 * e_q(tau, ctx)) < 1e-14);
  // Genuinely multivalued.
  CHECK(std::abs(e_q(tau.rotated(2.0 * kPi), ctx) - e_q(tau, ctx)) > 1e-3 * std::abs(e_q(tau, ctx)));
}

TEST_CASE("P_q representations") {
  {
    const auto ctx = make_context(0.5);
    Complex sum = 0.0;
    for (int j = 0; j < 64; ++j) sum += p_q_at(j / 64.0, ctx);
    CHECK(std::abs(sum / 64.0 - 1.0) < 1e-10);
    const auto tau = BranchedComplex::positive(0.42);
    CHECK(rel(p_q(tau, ctx), p_q_product(tau, ctx)) < 1e-12);
  }
  {
    const auto ctx = make_context(0.1);
    // Gaussian sum summed directly as an independent oracle.
    Complex direct = 0.0;
    for (int n = -60; n <= 60; ++n) direct += std::pow(0.1, 0.5 * (0.3 - 0.5 + n) * (0.3 - 0.5 + n));
    direct *= -ctx.ln_q() * ctx.c_q();
    CHECK(rel(p_q_at(0.3, ctx), direct) < 1e-12);
    CHECK(rel(p_q_gaussian(0.3, ctx), direct) < 1e-13);
    for (Real t : {0.1, 0.45, 0.9}) CHECK(std::abs(p_q_at(t + 1.0, ctx) - p_q_at(t, ctx)) < 1e-13);
  }
}

TEST_CASE("reciprocal coefficients") {
  const auto ctx = make_context(0.2);
  const Real qh = ctx.q_hat();
  for (int n = 0; n <= 10; ++n) {
    const Real an = p_q_reciprocal_coeff(n, ctx);
    CHECK(std::abs(std::pow(qh, 2 * n + 2) * p_q_reciprocal_coeff(n + 1, ctx) + an - 1.0) < 1e-13);
    CHECK(an <= 1.0);
    CHECK(an > 0.0);
  }
  const auto r = identity_eval("pq_normalisation", {}, ctx, 1e-12);
  CHECK(r.pass);
  CHECK_THROWS_AS(p_q_reciprocal_coeff(-1, ctx), Error);
}

TEST_CASE("Jacobi thetas") {
  const auto ctx = make_context(0.15);
  const Real qh = ctx.q_hat();
  CHECK(rel(jacobi_theta4(0.0, qh, ctx), p_q_at(0.0, ctx)) < 1e-14);
  CHECK(std::abs(jacobi_theta1(0.0, qh, ctx)) == 0.0);
  const Real t = 0.3;
  const Complex rhs = -kI * std::exp(kI * kPi * t) * std::pow(qh, -0.25) * jacobi_theta1(kPi * t, qh, ctx);
  CHECK(rel(p_q(BranchedComplex(std::pow(0.15, t), kPi), ctx), rhs) < 1e-11);
  // theta_1' against a central difference.
  const Complex u{0.7, 0.1};
  const Real h = 1e-5;
  const Complex fd = (jacobi_theta1(u + h, qh, ctx) - jacobi_theta1(u - h, qh, ctx)) / (2.0 * h);
  CHECK(rel(jacobi_theta1_prime(u, qh, ctx), fd) < 1e-8);
  CHECK(rel(jacobi_theta(4, u, qh, ctx), jacobi_theta4(u, qh, ctx)) == 0.0);
  CHECK_THROWS_AS(jacobi_theta(2, u, qh, ctx), Error);
}

TEST_CASE("identity examples") {
  const auto ctx = make_context(0.5);
  auto r = identity_eval("partfrac1", {{"x", 0.6}}, ctx);
  CHECK(r.pass);
  CHECK(r.rel_err < 1e-11);
  r = identity_eval("theta_sumdiff", {{"x", 0.4}, {"y", 0.4}}, ctx);
  CHECK(r.lhs == Complex(0.0));
  CHECK(r.rhs == Complex(0.0));
  CHECK(r.pass);
  r = identity_eval("eqab", {{"a", 1.0}, {"b", 1.0}, {"t", 0.3}}, ctx);
  CHECK(rel(r.lhs, 1.0) < 1e-15);
  CHECK(rel(r.rhs, 1.0) < 1e-15);
  CHECK_THROWS_AS(identity_eval("partfrac2", {{"a", 0.2}, {"x", 0.4}}, ctx), Error);
  CHECK_THROWS_AS(identity_eval("nope", {}, ctx), Error);
  try {
    identity_eval("partfrac2", {{"a", 0.2}, {"x", 0.4}}, ctx);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConstraintViolation);
  }
}

TEST_CASE("every identity passes on its default grid") {
  for (Real q : {0.1, 0.3, 0.5, 0.7}) {
    const auto ctx = make_context(q);
    for (const auto& id : identity_ids()) {
      for (const auto& p : identity_default_grid(id, ctx)) {
        const auto r = identity_eval(id, p, ctx, 1e-9);
        CHECK_MESSAGE(r.pass, id, " q=", q, " rel_err=", r.rel_err, " lhs=", r.lhs, " rhs=", r.rhs);
      }
    }
  }
}

TEST_CASE("E_q and P_q monodromy") {
  for (Real q : {0.1, 0.5}) {
    const auto ctx = make_context(q);
    for (Complex t : {Complex(0.42), Complex(1.9, -0.4)}) {
      const auto tau = BranchedComplex::principal(t);
      const Complex ratio = e_q(tau.rotated(2.0 * kPi), ctx) / e_q(tau, ctx);
      const Complex closed = -std::exp(-ctx.ln_q_hat()) * tau.pow(2.0 * kPi * kI / ctx.ln_q());
      CHECK(rel(ratio, closed) < 1e-12);
    }
  }
}
