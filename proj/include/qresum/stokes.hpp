#pragma once

// The q-periodic functions P_q^(c) and P_q^(d) that measure the difference
// between two q-Laplace resummations, their removable-singularity limits,
// monodromy, and the theta-kernel Cauchy-Heine integral.

#include <functional>

#include "qresum/context.hpp"
#include "qresum/laplace.hpp"
#include "qresum/types.hpp"

namespace qresum {

enum class PqcMethod { Series, Integral };

/// P_q^(c)(z) by its Fourier sine series or by the finite integral over
/// [q, 1]. The integral form needs |arg z| < pi.
Complex pqc(const BranchedComplex& z, const QContext& ctx, PqcMethod method = PqcMethod::Series);

/// P_q^(d)(z; lambda) = lambda theta'(lambda)/theta(lambda)
///   - (lambda/z) theta'(lambda/z)/theta(lambda/z) + ln z / ln q.
/// PoleAtParameter for lambda or lambda/z on -q^Z.
Complex pqd(const BranchedComplex& z, Complex lambda, const QContext& ctx);

/// Closed form of P^(d)(z; l1) - P^(d)(z; l2) as a theta quotient.
Complex pqd_difference_closed_form(Complex z, Complex l1, Complex l2, const QContext& ctx);

enum class StokesFn { C, D };
enum class LimitForm { Sum, Derivative };

/// Limit of P(z) / theta_q(-z) at z = q^m. For D, `form` selects the lattice
/// sum or the lambda d/dlambda form.
Complex removable_limit(StokesFn which, int m, const QContext& ctx, Complex lambda = 1.0,
                        LimitForm form = LimitForm::Sum);

/// P(z) / theta_q(-z), switching to removable_limit when |z/q^m - 1| < 1e-4.
Complex stokes_ratio(StokesFn which, const BranchedComplex& z, const QContext& ctx, Complex lambda = 1.0);

struct StokesJump {
  Complex jump;         // P(z e^{2 pi i}) - P(z)
  Complex closed_form;
};

StokesJump stokes_monodromy(StokesFn which, const BranchedComplex& z, const QContext& ctx, Complex lambda = 1.0);

/// log S(t) for an entire function S; -inf marks a zero.
using LogEntireFn = std::function<Complex(Complex)>;

/// Checks |S(t)| <= M (-c|t|;q)_inf on a polar grid out to |t| = 1e6 by
/// requiring the ratio not to grow at large |t|. Throws GrowthViolation.
void check_growth(const LogEntireFn& log_S, const QContext& ctx, Real c = 0.99);

/// The Cauchy-Heine integral built from S:
///   Theta:    -1/ln q  int_0^inf S(-t) / (theta_q(t) (t + z)) dt
///   E:        C_q int_0^inf E_q(t) S(-t) / (t + z) dt
///   Discrete: sum_n S(-t) t / (theta_q(t) (t + z)),  t = q^n lambda
/// It equals L_k B for the B whose theta transform has this representation.
Complex cauchy_heine_reconstruct(const LogEntireFn& log_S, const BranchedComplex& z, const QContext& ctx,
                                 const TransformKind& kind = TransformKind::Theta());

}  // namespace qresum
