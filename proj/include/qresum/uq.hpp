#pragma once

// The three resummations U_q^(k)(a,b;z) of 2phi0(a,b;-;q,z): integral, sum
// and Mellin-Barnes representations, solutions of the q-difference equation,
// connection formulas, remainder bounds, recurrences and the continued
// fraction.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qresum/context.hpp"
#include "qresum/laplace.hpp"
#include "qresum/types.hpp"

namespace qresum {

enum class UqMethod { Borel, Phi11, Poch, Symmetric, CauchyHeine, MellinBarnes };

const char* to_string(UqMethod m);
/// Throws ConstraintViolation for unknown names.
UqMethod uq_method_from_string(const std::string& name);
const std::vector<UqMethod>& all_uq_methods();

struct UqPoint {
  Complex a;
  Complex b;
  BranchedComplex z;
  TransformKind kind = TransformKind::E();
};

/// 2phi1(a,b;0;q,x) for any x off the poles, continued by Heine's
/// transformation when |x| is not small. Needs min(|a|,|b|) < 1 unless terminating.
Complex phi21_zero(Complex a, Complex b, Complex x, const QContext& ctx);

/// u(t) = (-a q t;q)_inf 1phi1(q/b; -a q t; q, -b q t), symmetric in a and b.
Complex u_function(Complex a, Complex b, Complex t, const QContext& ctx);

/// K_0 = (a, b;q)_inf / (q;q)_inf.
Complex k0(Complex a, Complex b, const QContext& ctx);

/// Whether `method` is admissible at `p` (and why not).
bool uq_admissible(const UqPoint& p, UqMethod method, const QContext& ctx, std::string* why = nullptr);
std::vector<UqMethod> admissible_methods(const UqPoint& p, const QContext& ctx);
/// Symmetric when |abz| < 1, otherwise phi11.
UqMethod default_method(const UqPoint& p);

/// U_q^(k)(a,b;z) by the given representation. Throws ConstraintViolation when
/// the method is not admissible, PoleAtLattice for Discrete z on -q^Z lambda.
Complex uq(const UqPoint& p, UqMethod method, const QContext& ctx);
inline Complex uq(const UqPoint& p, const QContext& ctx) { return uq(p, default_method(p), ctx); }

/// kappa(-q z) (abz;q)_inf 2phi1(q/a, q/b; 0; q, abz) (form 0) or
/// kappa(-q z) (bqz;q)_inf 1phi1(q/a; bqz; q, aqz) (form 1). -w means w e^{i pi}.
Complex y2(KernelKind kappa, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx, int form = 1);

/// which = 3: z^{-ln a/ln q} 2phi1(a,0;aq/b;q,q/(abz)); which = 4: a and b swapped.
Complex y_infinity(int which, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx);

struct Residual {
  Complex value;
  Real scale = 0.0;  // largest term in the combination
  Real relative() const { return std::abs(value) / std::max(scale, 1e-300); }
};

enum class Solution { U, Y2, Y3, Y4 };

/// z y(z/q^2) + (q - (a+b) z) y(z/q) - (q - abz) y(z). For Y2 the kernel of
/// `kind` is used (Discrete pairs with `kappa`).
Residual ode_residual(Solution s, const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                      const QContext& ctx, KernelKind kappa = KernelKind::Theta);

/// U(z) y2(z/q) - U(z/q) y2(z) - kappa(-z) (abz;q)_inf; E and Theta use their
/// own kernel, Discrete uses `kappa`.
Residual wronskian_residual(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                            const QContext& ctx, KernelKind kappa = KernelKind::Theta);

struct Jump {
  Complex jump;         // U(z e^{2 pi i}) - U(z)
  Complex closed_form;  // -2 pi i K_0 kappa' (bqz;q)_inf 1phi1(q/a;bqz;q,aqz)
};

/// Monodromy of U^E or U^theta around z = 0.
Jump monodromy_jump(KernelKind kind, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx);

enum class PkForm { Lambda, E, E2, Theta1, Theta2, Theta3 };
const char* to_string(PkForm f);

/// q-periodic connection multiplier p_k(a, z). `lambda` is used by PkForm::Lambda.
Complex pk_multiplier(PkForm form, Complex a, const BranchedComplex& z, const QContext& ctx, Complex lambda = 1.0);
/// The default form for a transform kind (Lambda, E or Theta1).
Complex pk_multiplier(const TransformKind& kind, Complex a, const BranchedComplex& z, const QContext& ctx);

/// Right-hand side of the connection formula at infinity. Needs b/a not in q^Z
/// and |q/(abz)| < 1.
Complex connection_infinity(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z,
                            const QContext& ctx);

struct ConfluentResult {
  Complex value;      // right-hand side, solved for U
  Complex pk;         // p_k(a, z)
  Complex a_dpk_da;   // a dp_k/da by Richardson-extrapolated central differences
  Real step = 1e-5;   // in ln a
};

/// b = a q^m limit of the connection formula.
ConfluentResult connection_confluent(const TransformKind& kind, Complex a, int m, const BranchedComplex& z,
                                     const QContext& ctx);

enum class BoundZone { HalfPlane, SectorE, SectorTheta, SectorDiscrete };
const char* to_string(BoundZone z);

struct RemainderBound {
  int N = 0;
  Complex remainder;
  Real bound = 0.0;
  Real M_q = 0.0;
  Real c = 0.0;
  BoundZone zone = BoundZone::HalfPlane;
};

/// sup |u(t)| / (-c q |t|;q)_inf over |t| in [1e-3, 1e3] on 12 rays in
/// Re t >= 0, times 1.25.
Real estimate_Mq(Complex a, Complex b, const QContext& ctx, int radial_points = 121, int rays = 12);

/// Remainder after N terms of the asymptotic series and its bound for the
/// zone of arg z. Pass M_q to skip the estimate.
RemainderBound remainder_and_bound(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z, int N,
                                   const QContext& ctx, std::optional<Real> M_q = std::nullopt);

/// Partial sum of the 2phi0 series, n < N.
Complex phi20_partial_sum(Complex a, Complex b, const BranchedComplex& z, int N, const QContext& ctx);

/// Residuals of the three parameter-shift relations.
std::array<Residual, 3> recurrence_residuals(const TransformKind& kind, Complex a, Complex b,
                                             const BranchedComplex& z, const QContext& ctx);

/// c_n = 1 + alpha_1 z/(1 + alpha_2 z/(1 + ... alpha_n z)), by backward recurrence.
Complex cf_convergent(int n, Complex a, Complex b, Complex z, const QContext& ctx);

struct CfGap {
  Complex even_limit;
  Complex odd_limit;
  Real gap = 0.0;
  int n_used = 0;
  bool stabilised = false;
};

CfGap cf_gap(Complex a, Complex b, Complex z, const QContext& ctx, int n_max = 200);

/// U(a,b;z) / U(a,bq;z/q) for the given kind.
Complex cf_target(const TransformKind& kind, Complex a, Complex b, const BranchedComplex& z, const QContext& ctx);

}  // namespace qresum
