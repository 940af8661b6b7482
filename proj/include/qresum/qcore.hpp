#pragma once

// q-Pochhammer symbols, the theta function theta_q, the Gaussian kernel E_q,
// the q-periodic bridge P_q and the classical Jacobi thetas.

#include "qresum/context.hpp"
#include "qresum/types.hpp"

namespace qresum {

inline QContext make_context(Real q, Real eps = 1e-12, int max_terms = 10'000) {
  return QContext::make(q, eps, max_terms);
}

/// (a;q)_inf. Exactly 0 when a factor vanishes to working precision.
Complex qpoch_inf(Complex a, const QContext& ctx);
/// Sum of log(1 - a q^n); real part is log|(a;q)_inf|. -inf real part at a zero.
Complex log_qpoch_inf(Complex a, const QContext& ctx);
/// (a;q)_nu = (a;q)_inf / (a q^nu;q)_inf, finite products for integer nu.
Complex qpoch(Complex a, Complex nu, const QContext& ctx);
/// (a;q)_n for integer n (negative n allowed).
Complex qpoch_n(Complex a, int n, const QContext& ctx);

/// theta_q(tau) = (q,-tau,-q/tau;q)_inf via annulus reduction and the triple product.
Complex theta_q(Complex tau, const QContext& ctx);
inline Complex theta_q(const BranchedComplex& tau, const QContext& ctx) { return theta_q(tau.value(), ctx); }
/// log theta_q(tau) (some branch); real part -inf at a zero.
Complex log_theta_q(Complex tau, const QContext& ctx);
/// Direct bilateral series sum q^{n(n-1)/2} tau^n; reference evaluation.
Complex theta_q_series(Complex tau, const QContext& ctx);

/// tau theta_q'(tau) / theta_q(tau).
Complex theta_q_logderiv(Complex tau, const QContext& ctx);
inline Complex theta_q_logderiv(const BranchedComplex& tau, const QContext& ctx) {
  return theta_q_logderiv(tau.value(), ctx);
}
/// Same quantity from the term-wise differentiated bilateral series.
Complex theta_q_logderiv_series(Complex tau, const QContext& ctx);
/// The q-periodic part D of the log-derivative:
/// tau theta_q'(tau)/theta_q(tau) = -ln(tau)/ln q + 1/2 + D(tau), with ln tau on
/// the sheet of tau. Computed from the Fourier series of P_q, so it keeps full
/// relative accuracy when D is of size qhat.
Complex theta_q_logderiv_periodic(const BranchedComplex& tau, const QContext& ctx);
/// d/dtau of tau theta_q'(tau)/theta_q(tau).
Complex theta_q_logderiv_prime(Complex tau, const QContext& ctx);

/// E_q(tau) = q^{1/8} tau^{-1/2} exp(ln^2 tau / (2 ln q)), on the sheet of tau.
Complex e_q(const BranchedComplex& tau, const QContext& ctx);
Complex log_e_q(const BranchedComplex& tau, const QContext& ctx);

/// P_q(q^t) from the Fourier series sum (-1)^n qhat^{n^2} e^{2 n pi i t}; complex t.
Complex p_q_at(Complex t, const QContext& ctx);
/// P_q(tau) with t = ln tau / ln q taken on the sheet of tau.
Complex p_q(const BranchedComplex& tau, const QContext& ctx);
/// -ln q C_q E_q(tau) theta_q(tau).
Complex p_q_product(const BranchedComplex& tau, const QContext& ctx);
/// -ln q C_q sum_n q^{(t - 1/2 + n)^2 / 2}.
Complex p_q_gaussian(Complex t, const QContext& ctx);
/// Fourier coefficients of 1/P_q: sum_{m>=0} (-1)^m qhat^{m(m+2n+1)}.
Real p_q_reciprocal_coeff(int n, const QContext& ctx);

/// theta_1(u, nome) = 2 sum (-1)^n nome^{(n+1/2)^2} sin((2n+1)u).
Complex jacobi_theta1(Complex u, Real nome, const QContext& ctx);
/// d/du theta_1(u, nome).
Complex jacobi_theta1_prime(Complex u, Real nome, const QContext& ctx);
/// theta_4(u, nome) = 1 + 2 sum_{n>=1} (-1)^n nome^{n^2} cos(2nu).
Complex jacobi_theta4(Complex u, Real nome, const QContext& ctx);
/// Dispatch on kind (1 or 4).
Complex jacobi_theta(int kind, Complex u, Real nome, const QContext& ctx);

/// Value at which theta_q is treated as vanishing.
inline constexpr Real kThetaPoleFloor = 1e-250;

}  // namespace qresum
