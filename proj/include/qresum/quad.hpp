#pragma once

// Half-line integrals against the E_q and 1/theta_q kernels, bilateral lattice
// sums, vertical-line Mellin-Barnes integrals and a Gauss-Legendre rule for
// finite intervals.

#include <functional>
#include <optional>

#include "qresum/context.hpp"
#include "qresum/types.hpp"

namespace qresum {

enum class KernelKind { E, Theta };

const char* to_string(KernelKind kind);

/// Log-domain integrand: t -> log f(t). A real part of -inf means f(t) = 0.
using LogFn = std::function<Complex(Complex)>;
using ValueFn = std::function<Complex(Complex)>;

/// log f for a value-returning f.
LogFn log_of(ValueFn f);

struct QuadratureSpec {
  /// Starting spacing in u, t = e^{u + i zeta}.
  Real step_h = 0.2;
  /// Half-width of the u-window around its centre; 0 selects it by scanning.
  Real half_width_U = 0.0;
  /// Ray angle zeta; unset selects it from arg z.
  std::optional<Real> ray_angle;
  /// Halve the step until successive values agree.
  bool refine = true;
  /// Relative agreement between successive refinements; 0 uses ctx.eps().
  Real tol = 0.0;
  int max_halvings = 7;
  /// Absolute agreement floor, for integrals whose value is near zero.
  Real abs_tol = 0.0;
};

struct QuadDiagnostics {
  int evaluations = 0;
  int levels = 0;
  Real step = 0.0;
  Real last_increment = 0.0;
  Real est_error = 0.0;
  Real lo = 0.0, hi = 0.0;  // integration window in the line variable
  Real ray_angle = 0.0;
  Complex previous;  // second-to-last iterate
};

struct QuadResult {
  Complex value;
  QuadDiagnostics diag;
};

/// kappa_E = C_q E_q(tau), kappa_theta = -1 / (ln q theta_q(tau)).
Complex kernel(KernelKind kind, const BranchedComplex& tau, const QContext& ctx);
Complex log_kernel(KernelKind kind, const BranchedComplex& tau, const QContext& ctx);

/// Ray used for a given arg z: 0 for |arg z| <= pi/2, else rotated half way
/// towards arg z (capped at 3pi/4 for E). Theta requires |arg z| < 2pi.
Real default_ray(KernelKind kind, const BranchedComplex& z);

/// Integral of exp(log_g(t)) dt/t along t = e^{u + i zeta}, u in R, by the
/// trapezoid rule in u. `u_center` seeds the window search.
QuadResult integrate_ray(const LogFn& log_g, Real zeta, Real u_center, const QuadratureSpec& spec,
                         const QContext& ctx);

/// Integral of f(t) kappa(t/z) dt/t over (0, inf) rotated to the chosen ray.
QuadResult integrate_halfline(const LogFn& log_f, const BranchedComplex& z, KernelKind kind,
                              const QuadratureSpec& spec, const QContext& ctx);
inline QuadResult integrate_halfline(const LogFn& log_f, const BranchedComplex& z, KernelKind kind,
                                     const QContext& ctx) {
  return integrate_halfline(log_f, z, kind, QuadratureSpec{}, ctx);
}

struct LatticeResult {
  Complex value;
  int terms = 0;
  Real max_term = 0.0;
};

/// Throws PoleAtParameter for lambda on -q^Z and PoleAtLattice for z on -q^Z lambda.
void check_lattice(Complex lambda, Complex z, const QContext& ctx);

/// sum_n f(q^n lambda) / theta_q(q^n lambda / z).
LatticeResult bilateral_lattice_sum(const LogFn& log_f, Complex lambda, Complex z, const QContext& ctx);

struct ContourSpec {
  Real sigma = -0.5;
  /// Open interval the abscissa must lie in (poles on either side).
  Real left = -1.0, right = 0.0;
  Real step = 0.25;
  /// Truncation |Im s| <= trunc_T; 0 selects it by scanning.
  Real trunc_T = 0.0;
  Real tol = 0.0;
  int max_halvings = 8;
};

/// Integral of exp(log_F(s)) ds upwards along Re s = sigma (includes the
/// factor i from ds = i d(Im s)).
QuadResult mb_line_integral(const std::function<Complex(Complex)>& log_F, const ContourSpec& spec,
                            const QContext& ctx);

/// Composite 30-point Gauss-Legendre rule on [a, b].
Complex gauss_legendre(const std::function<Complex(Real)>& f, Real a, Real b, int panels = 4);

}  // namespace qresum
