#include "qresum/series.hpp"

#include <cmath>
#include <string>

#include "qresum/detail/summation.hpp"
#include "qresum/qcore.hpp"

namespace qresum {

namespace {

Real series_tol(const QContext& ctx) { return ctx.eps() * 1e-4; }

Complex upper_prod(const std::vector<Complex>& v, Real qn) {
  Complex p = 1.0;
  for (const Complex& a : v) p *= 1.0 - a * qn;
  return p;
}

void check_lower(const std::vector<Complex>& lower, int terminate_at, const QContext& ctx) {
  for (const Complex& b : lower) {
    if (const auto m = negative_q_power(b, ctx)) {
      if (terminate_at < 0 || *m < terminate_at) {
        throw Error(Errc::PoleAtParameter, "lower parameter equals q^-" + std::to_string(*m));
      }
    }
  }
}

}  // namespace

Complex FormalSeries::eval(Complex t) const {
  Complex s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * t + *it;
  return s;
}

std::optional<int> negative_q_power(Complex a, const QContext& ctx) {
  if (std::abs(a) < 0.5) return std::nullopt;
  const Real k = std::log(std::abs(a)) / -ctx.ln_q();
  const int m = static_cast<int>(std::lround(k));
  if (m < 0 || m > 60) return std::nullopt;
  if (std::abs(a * std::exp(m * ctx.ln_q()) - 1.0) < 1e-12) return m;
  return std::nullopt;
}

Complex phi(const PhiParams& params, Complex z, const QContext& ctx) {
  const int r = static_cast<int>(params.upper.size());
  const int s = static_cast<int>(params.lower.size());
  const int power = 1 + s - r;

  int terminate_at = -1;
  std::vector<Complex> upper = params.upper;
  for (Complex& a : upper) {
    if (const auto m = negative_q_power(a, ctx)) {
      a = std::exp(-(*m) * ctx.ln_q());
      if (terminate_at < 0 || *m < terminate_at) terminate_at = *m;
    }
  }
  check_lower(params.lower, terminate_at, ctx);

  if (terminate_at < 0) {
    if (power < 0 && z != Complex(0.0)) {
      throw Error(Errc::DivergentSeries, "r > s+1 series is divergent; use a resummation");
    }
    if (power == 0 && std::abs(z) >= 1.0) {
      throw Error(Errc::DivergentSeries, "r = s+1 series needs |z| < 1");
    }
  }

  const Real q = ctx.q();
  detail::Accumulator acc;
  Complex t = 1.0;
  Real qn = 1.0;  // q^n
  Real max_term = 0.0;
  int small = 0;
  const Real tol = series_tol(ctx);
  for (int n = 0; n < ctx.max_terms(); ++n) {
    acc.add(t);
    if (terminate_at >= 0 && n == terminate_at) return acc.value();
    const Real mag = std::abs(t);
    if (!std::isfinite(mag)) throw Error(Errc::TruncationFailure, "non-finite term in phi");
    max_term = std::max(max_term, mag);
    if (mag <= tol * max_term) {
      if (++small >= 5 && terminate_at < 0) return acc.value();
    } else {
      small = 0;
    }
    Complex ratio = upper_prod(upper, qn) / (upper_prod(params.lower, qn) * (1.0 - qn * q)) * z;
    if (power != 0) ratio *= std::pow(-qn, power);
    t *= ratio;
    qn *= q;
  }
  throw Error(Errc::TruncationFailure, "phi did not converge within max_terms");
}

Complex psi(const PhiParams& params, Complex z, const QContext& ctx) {
  const int r = static_cast<int>(params.upper.size());
  const int s = static_cast<int>(params.lower.size());
  if (r > s) throw Error(Errc::DivergentSeries, "bilateral series with r > s diverges");
  // A lower parameter equal to q kills every n < 0 term.
  bool one_sided = false;
  for (const Complex& b : params.lower) one_sided = one_sided || std::abs(b - ctx.q()) < 1e-12;
  Complex bprod = 1.0, aprod = z;
  for (const Complex& b : params.lower) bprod *= b;
  for (const Complex& a : params.upper) aprod *= a;
  if (!one_sided && std::abs(bprod) >= std::abs(aprod)) {
    throw Error(Errc::DivergentSeries, "bilateral series needs |b_1..b_s/(a_1..a_r z)| < 1");
  }
  if (r == s && std::abs(z) >= 1.0) throw Error(Errc::DivergentSeries, "bilateral series with r = s needs |z| < 1");
  for (const Complex& a : params.upper) {
    for (int k = 0; k <= 200; ++k) {
      const Complex target = std::exp((k + 1.0) * ctx.ln_q());
      if (std::abs(a - target) < 1e-10 * std::abs(target)) {
        throw Error(Errc::PoleAtParameter, "upper parameter equals q^" + std::to_string(k + 1));
      }
      if (std::abs(target) < 1e-300) break;
    }
  }
  check_lower(params.lower, -1, ctx);

  const int power = s - r;
  const Real q = ctx.q();
  const Real tol = series_tol(ctx);

  // n >= 0, forward ratios.
  Complex t = 1.0;
  Real qn = 1.0;
  auto up = [&](int) {
    const Complex cur = t;
    Complex ratio = upper_prod(params.upper, qn) / upper_prod(params.lower, qn) * z;
    if (power != 0) ratio *= std::pow(-qn, power);
    t *= ratio;
    qn *= q;
    return cur;
  };
  const auto positive = detail::unilateral_sum(up, tol, ctx.max_terms());

  // n < 0, backward ratios t_{n-1} = t_n * prod(1 - b q^{n-1}) / prod(1 - a q^{n-1}) * (-q^{n-1})^{-power} / z.
  Complex u = 1.0;
  Real qm = 1.0 / q;  // q^{n-1} starting at n = 0
  auto down = [&](int) {
    Complex ratio = upper_prod(params.lower, qm) / upper_prod(params.upper, qm) / z;
    if (power != 0) ratio *= std::pow(-qm, -power);
    u *= ratio;
    qm /= q;
    return u;
  };
  if (one_sided) return positive.value;
  const auto negative = detail::unilateral_sum(down, tol, ctx.max_terms());
  return positive.value + negative.value;
}

FormalSeries phi20_coeffs(Complex a, Complex b, int N, const QContext& ctx) {
  if (N < 1) throw Error(Errc::InvalidN, "phi20_coeffs needs N >= 1");
  FormalSeries out;
  const int cap = std::min(N, 200);
  out.clamped = cap < N;
  Complex c = 1.0;
  Real qn = 1.0;
  out.coeffs.push_back(c);
  for (int n = 0; n < cap; ++n) {
    // c_{n+1} / c_n = (1 - a q^n)(1 - b q^n) / (1 - q^{n+1}) * (-q^{-n})
    const Complex next = c * (1.0 - a * qn) * (1.0 - b * qn) / (1.0 - qn * ctx.q()) * (-1.0 / qn);
    if (!std::isfinite(std::abs(next)) || std::abs(next) > 1e300) {
      out.clamped = true;
      break;
    }
    c = next;
    out.coeffs.push_back(c);
    qn *= ctx.q();
  }
  return out;
}

FormalSeries qborel(const FormalSeries& s, const QContext& ctx) {
  FormalSeries out = s;
  for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
    out.coeffs[n] *= std::exp(detail::binom2(static_cast<Real>(n)) * ctx.ln_q());
  }
  return out;
}

Complex stieltjes_wigert(int n, Complex x, const QContext& ctx) {
  if (n < 0) throw Error(Errc::InvalidN, "Stieltjes-Wigert degree must be >= 0");
  const Real q = ctx.q();
  // term_k = (q^{-n};q)_k / (q;q)_k q^{C(k,2)} (x q^{n+1})^k
  Complex term = 1.0;
  detail::Accumulator acc;
  acc.add(term);
  const Real qinv_n = std::pow(q, -n);
  for (int k = 0; k < n; ++k) {
    const Real qk = std::pow(q, k);
    term *= (1.0 - qinv_n * qk) / (1.0 - qk * q) * qk * x * std::pow(q, n + 1);
    acc.add(term);
  }
  return acc.value() / qpoch_n(q, n, ctx);
}

Complex psi_q(Complex a, const QContext& ctx) {
  detail::Accumulator acc;
  Complex x = a;
  for (int l = 0; l < ctx.max_terms(); ++l) {
    const Complex d = 1.0 - x;
    if (std::abs(d) < 1e-12) throw Error(Errc::PoleAtParameter, "Psi_q pole at a = q^-" + std::to_string(l));
    const Complex term = x / d;
    acc.add(term);
    if (std::abs(x) < 1e-18) return acc.value();
    x *= ctx.q();
  }
  throw Error(Errc::TruncationFailure, "Psi_q did not converge");
}

}  // namespace qresum
