#include "qresum/quad.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qresum/detail/summation.hpp"
#include "qresum/qcore.hpp"

namespace qresum {

namespace {

constexpr Real kScanStep = 0.5;
constexpr Real kScanDrop = 50.0;  // e^-50 relative to the peak
constexpr int kScanRun = 6;
constexpr int kScanMax = 4000;

struct LineSettings {
  Real h0;
  Real half_width;
  Real tol;
  bool refine;
  int max_halvings;
  Real abs_tol = 0.0;
};

Real re_or_floor(Complex g) {
  if (std::isnan(g.real()) || std::isnan(g.imag())) {
    throw Error(Errc::NoConvergence, "integrand is NaN on the contour");
  }
  return g.real();
}

// Trapezoid rule for the integral of exp(g(x)) over the real line.
QuadResult line_trapezoid(const std::function<Complex(Real)>& g, Real center, const LineSettings& set) {
  QuadDiagnostics diag;
  Real lo = center - set.half_width, hi = center + set.half_width;
  Real peak = re_or_floor(g(center));
  ++diag.evaluations;
  if (set.half_width <= 0.0) {
    auto scan = [&](Real dir) {
      int below = 0;
      for (int k = 1; k <= kScanMax; ++k) {
        const Real x = center + dir * kScanStep * k;
        const Real r = re_or_floor(g(x));
        ++diag.evaluations;
        if (r > peak) peak = r;
        below = (r < peak - kScanDrop) ? below + 1 : 0;
        if (below >= kScanRun) return x;
      }
      throw Error(Errc::NoConvergence, "integrand does not decay along the contour");
    };
    hi = scan(1.0);
    lo = scan(-1.0);
  }
  if (!std::isfinite(peak)) throw Error(Errc::NoConvergence, "integrand vanishes or overflows at its centre");
  diag.lo = lo;
  diag.hi = hi;

  // Scaled by e^{-peak} so nothing overflows.
  auto value = [&](Real x) { return std::exp(g(x) - peak); };
  Real h = set.h0;
  const int n = static_cast<int>(std::ceil((hi - lo) / h));
  h = (hi - lo) / n;
  detail::Accumulator acc;
  Real l1 = 0.0;
  for (int j = 0; j <= n; ++j) {
    const Complex v = value(lo + j * h) * ((j == 0 || j == n) ? 0.5 : 1.0);
    acc.add(v);
    l1 += std::abs(v);
  }
  diag.evaluations += n + 1;
  Complex sum = acc.value();
  Complex current = h * sum;
  Complex previous = current;
  int points = n;
  diag.levels = 1;
  if (set.refine) {
    bool converged = false;
    for (int level = 0; level < set.max_halvings; ++level) {
      detail::Accumulator mid;
      for (int j = 0; j < points; ++j) {
        const Complex v = value(lo + (j + 0.5) * h);
        mid.add(v);
        l1 += std::abs(v);
      }
      diag.evaluations += points;
      sum += mid.value();
      points *= 2;
      h *= 0.5;
      previous = current;
      current = h * sum;
      ++diag.levels;
      const Real inc = std::abs(current - previous);
      if (inc <= set.tol * std::abs(current) + 1e-15 * h * l1 + set.abs_tol * std::exp(-peak)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      diag.previous = previous * std::exp(peak);
      throw Error(Errc::NoConvergence,
                  "trapezoid refinement stalled: last two iterates differ by " +
                      std::to_string(std::abs(current - previous) / std::max(std::abs(current), 1e-300)));
    }
  }
  const Real scale = std::exp(peak);
  diag.step = h;
  diag.previous = previous * scale;
  diag.last_increment = std::abs(current - previous) * scale;
  diag.est_error = diag.last_increment;
  return {current * scale, diag};
}

Real nearest_lattice_gap(Complex w, const QContext& ctx) {
  // Relative distance from w to the nearest q^n, n in Z.
  if (std::abs(w) == 0.0) return std::numeric_limits<Real>::infinity();
  const Real n = std::round(std::log(std::abs(w)) / ctx.ln_q());
  const Real qn = std::exp(n * ctx.ln_q());
  return std::abs(w - qn) / qn;
}

}  // namespace

const char* to_string(KernelKind kind) { return kind == KernelKind::E ? "E" : "theta"; }

LogFn log_of(ValueFn f) {
  return [f = std::move(f)](Complex t) { return std::log(f(t)); };
}

Complex log_kernel(KernelKind kind, const BranchedComplex& tau, const QContext& ctx) {
  if (kind == KernelKind::E) return std::log(ctx.c_q()) + log_e_q(tau, ctx);
  const Complex lt = log_theta_q(tau.value(), ctx);
  if (lt.real() < std::log(kThetaPoleFloor)) {
    throw Error(Errc::PoleAtParameter, "theta kernel evaluated at a pole");
  }
  return -std::log(-ctx.ln_q()) - lt;
}

Complex kernel(KernelKind kind, const BranchedComplex& tau, const QContext& ctx) {
  if (kind == KernelKind::Theta) {
    const Complex w = -tau.value();
    if (nearest_lattice_gap(w, ctx) < 1e-8) throw Error(Errc::PoleAtParameter, "theta kernel pole at -q^n");
  }
  return std::exp(log_kernel(kind, tau, ctx));
}

Real default_ray(KernelKind kind, const BranchedComplex& z) {
  const Real phi = z.arg();
  if (std::abs(phi) <= kPi / 2) return 0.0;
  if (kind == KernelKind::Theta) {
    if (std::abs(phi) >= 2.0 * kPi) {
      throw Error(Errc::PoleOnRay, "theta-kernel transform needs |arg z| < 2 pi");
    }
    return phi / 2.0;
  }
  return std::clamp(phi / 2.0, -0.75 * kPi, 0.75 * kPi);
}

QuadResult integrate_ray(const LogFn& log_g, Real zeta, Real u_center, const QuadratureSpec& spec,
                         const QContext& ctx) {
  if (!(spec.step_h > 0.0) || spec.step_h > 0.25) {
    throw Error(Errc::OutOfRange, "quadrature step must lie in (0, 0.25]");
  }
  const Complex rot = std::polar(1.0, zeta);
  auto g = [&](Real u) { return log_g(std::exp(u) * rot); };
  LineSettings set{spec.step_h, spec.half_width_U, spec.tol > 0.0 ? spec.tol : ctx.eps(), spec.refine,
                   spec.max_halvings, spec.abs_tol};
  QuadResult r = line_trapezoid(g, u_center, set);
  r.diag.ray_angle = zeta;
  return r;
}

QuadResult integrate_halfline(const LogFn& log_f, const BranchedComplex& z, KernelKind kind,
                              const QuadratureSpec& spec, const QContext& ctx) {
  const Real zeta = spec.ray_angle ? *spec.ray_angle : default_ray(kind, z);
  if (kind == KernelKind::Theta) {
    const Real d = std::remainder(zeta - z.arg() - kPi, 2.0 * kPi);
    if (std::abs(d) < 1e-6) {
      throw Error(Errc::PoleOnRay, "ray passes through theta-kernel poles; try zeta +- 0.1");
    }
  }
  auto g = [&](Complex t) {
    const BranchedComplex tb(std::abs(t), zeta);
    return log_f(t) + log_kernel(kind, tb / z, ctx);
  };
  Real center = std::log(z.modulus());
  if (kind == KernelKind::E) center += 0.5 * ctx.ln_q();
  return integrate_ray(g, zeta, center, spec, ctx);
}

void check_lattice(Complex lambda, Complex z, const QContext& ctx) {
  if (nearest_lattice_gap(-lambda, ctx) < 1e-8) {
    throw Error(Errc::PoleAtParameter, "lambda on excluded lattice -q^n");
  }
  if (std::abs(z) == 0.0) throw Error(Errc::PoleAtLattice, "z = 0");
  if (nearest_lattice_gap(-z / lambda, ctx) < 1e-8) {
    throw Error(Errc::PoleAtLattice, "z on the lattice -q^n lambda");
  }
}

LatticeResult bilateral_lattice_sum(const LogFn& log_f, Complex lambda, Complex z, const QContext& ctx) {
  check_lattice(lambda, z, ctx);
  auto term = [&](int n) {
    const Complex t = lambda * std::exp(n * ctx.ln_q());
    const Complex lf = log_f(t);
    if (lf.real() == -std::numeric_limits<Real>::infinity()) return Complex(0.0);
    return std::exp(lf - log_theta_q(t / z, ctx));
  };
  const auto r = detail::bilateral_sum(term, ctx.eps() * 1e-4, ctx.max_terms());
  return {r.value, r.terms, r.max_term};
}

QuadResult mb_line_integral(const std::function<Complex(Complex)>& log_F, const ContourSpec& spec,
                            const QContext& ctx) {
  if (!(spec.sigma > spec.left && spec.sigma < spec.right)) {
    throw Error(Errc::BadAbscissa, "abscissa " + std::to_string(spec.sigma) + " outside (" +
                                       std::to_string(spec.left) + ", " + std::to_string(spec.right) + ")");
  }
  auto g = [&](Real tau) { return log_F(Complex(spec.sigma, tau)); };
  LineSettings set{spec.step, spec.trunc_T, spec.tol > 0.0 ? spec.tol : ctx.eps(), true, spec.max_halvings};
  QuadResult r = line_trapezoid(g, 0.0, set);
  r.value *= kI;
  r.diag.previous *= kI;
  return r;
}

Complex gauss_legendre(const std::function<Complex(Real)>& f, Real a, Real b, int panels) {
  using Rule = boost::math::quadrature::gauss<Real, 30>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  detail::Accumulator acc;
  const Real width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const Real mid = a + (p + 0.5) * width, half = 0.5 * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        acc.add(w[i] * half * f(mid));
      } else {
        acc.add(w[i] * half * f(mid + half * x[i]));
        acc.add(w[i] * half * f(mid - half * x[i]));
      }
    }
  }
  return acc.value();
}

}  // namespace qresum
