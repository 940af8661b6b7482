#include "qresum/laplace.hpp"

#include <cmath>
#include <string>

#include "qresum/detail/summation.hpp"
#include "qresum/identities.hpp"
#include "qresum/qcore.hpp"
#include "qresum/series.hpp"
#include "qresum/uq.hpp"

namespace qresum {

namespace {

constexpr Real kRowMargin = 1e-6;

bool on_negative_lattice(Complex lambda, const QContext& ctx) {
  const Complex w = -lambda;
  if (std::abs(w) == 0.0) return true;
  const Real n = std::round(std::log(std::abs(w)) / ctx.ln_q());
  const Real qn = std::exp(n * ctx.ln_q());
  return std::abs(w - qn) / qn < 1e-8;
}

Complex log_qpoch_scaled(Complex c, Complex t, const QContext& ctx) { return log_qpoch_inf(-c * t, ctx); }

// The probe functions of the operator-law rows: (-0.3t)_inf, (-0.2q/t)_inf and their product.
constexpr Real kProbeA = 0.3;
constexpr Real kProbeB = 0.2;

LogFn probe(int which, const QContext& ctx) {
  const Real q = ctx.q();
  switch (which) {
    case 0:
      return [&ctx](Complex t) { return log_qpoch_scaled(kProbeA, t, ctx); };
    case 1:
      return [&ctx, q](Complex t) { return log_qpoch_inf(-kProbeB * q / t, ctx); };
    case 2:
      return [&ctx, q](Complex t) { return log_qpoch_scaled(kProbeA, t, ctx) + log_qpoch_inf(-kProbeB * q / t, ctx); };
    default:
      throw Error(Errc::ConstraintViolation, "probe must be 0, 1 or 2");
  }
}

// The probe transforms need b < w < 1/a along the real axis.
void require_probe_region(int which, const BranchedComplex& w, const char* what) {
  const bool real_positive = w.arg() == 0.0;
  const Real x = w.modulus();
  const bool upper_ok = which == 1 || x < (1.0 - kRowMargin) / kProbeA;
  const bool lower_ok = which == 0 || x > kProbeB * (1.0 + kRowMargin);
  if (!real_positive || !upper_ok || !lower_ok) {
    throw Error(Errc::ConstraintViolation, std::string(what) + " leaves the probe's convergence interval");
  }
}

void require_between(Real lo, const BranchedComplex& z, Real hi) {
  if (z.arg() != 0.0) throw Error(Errc::ConstraintViolation, "rows 5-7 need real positive z");
  const Real x = z.modulus();
  if (!(x > lo + kRowMargin) || !(x < hi - kRowMargin)) {
    throw Error(Errc::ConstraintViolation, "rows 5-7 need b < z < 1/a");
  }
}

Complex row_value(int row, const ParamRecord& p, const TransformKind& kind, const BranchedComplex& z,
                  Complex& rhs, std::string& note, const QContext& ctx) {
  const Real q = ctx.q();
  switch (row) {
    case 1: {
      const int n = static_cast<int>(p.real("n"));
      const int which = static_cast<int>(p.get_or("probe", 0.0).real());
      const LogFn f = probe(which, ctx);
      const BranchedComplex w = z.scaled(std::pow(q, -n));
      require_probe_region(which, z, "z");
      require_probe_region(which, w, "z q^-n");
      const LogFn g = [f, n](Complex t) { return Real(n) * std::log(t) + f(t); };
      rhs = std::pow(q, -detail::binom2(n)) * z.pow(Real(n)) * qlaplace(kind, f, w, ctx);
      note = "t^n f(t) against q^{-C(n,2)} z^n F(z q^{-n})";
      return qlaplace(kind, g, z, ctx);
    }
    case 2: {
      const int which = static_cast<int>(p.get_or("probe", 0.0).real());
      const LogFn f = probe(which, ctx);
      const BranchedComplex w = z.scaled(q);
      require_probe_region(which, z, "z");
      require_probe_region(which, w, "q z");
      const LogFn g = [f, q](Complex t) { return f(q * t); };
      rhs = qlaplace(kind, f, w, ctx);
      note = "f(qt) against F(qz)";
      return qlaplace(kind, g, z, ctx);
    }
    case 3: {
      const int which = static_cast<int>(p.get_or("probe", 0.0).real());
      const LogFn f = probe(which, ctx);
      const BranchedComplex w = z.inverse();
      require_probe_region(which, w, "1/z");
      const LogFn g = [f, q](Complex t) { return f(q / t); };
      // The reflected lattice q^{k+1}/lambda is the lattice of q/lambda.
      const TransformKind reflected =
          kind.discrete() ? TransformKind::Discrete(q / kind.lambda(), ctx) : kind;
      rhs = qlaplace(reflected, f, w, ctx);
      note = "f(q/t) against F(1/z)";
      return qlaplace(kind, g, z, ctx);
    }
    case 4: {
      const int n = static_cast<int>(p.real("n"));
      rhs = std::pow(q, -detail::binom2(n)) * z.pow(Real(n));
      return qlaplace(kind, [n](Complex t) { return Real(n) * std::log(t); }, z, ctx);
    }
    case 5: {
      const Complex a = p.get("a");
      require_between(0.0, z, 1.0 / std::abs(a));
      rhs = 1.0 / qpoch_inf(a * z.value(), ctx);
      return qlaplace(kind, [a, &ctx](Complex t) { return log_qpoch_inf(-a * t, ctx); }, z, ctx);
    }
    case 6: {
      const Complex b = p.get("b");
      require_between(std::abs(b), z, std::numeric_limits<Real>::infinity());
      rhs = 1.0 / qpoch_inf(b / z.value(), ctx);
      return qlaplace(kind, [b, q, &ctx](Complex t) { return log_qpoch_inf(-b * q / t, ctx); }, z, ctx);
    }
    case 7: {
      const Complex a = p.get("a"), b = p.get("b");
      require_between(std::abs(b), z, 1.0 / std::abs(a));
      rhs = qpoch_inf(a * b, ctx) / (qpoch_inf(a * z.value(), ctx) * qpoch_inf(b / z.value(), ctx));
      return qlaplace(
          kind, [a, b, q, &ctx](Complex t) { return log_qpoch_inf(-a * t, ctx) + log_qpoch_inf(-b * q / t, ctx); }, z,
          ctx);
    }
    case 8: {
      if (kind.discrete()) throw Error(Errc::ConstraintViolation, "row 8 is stated for the E and theta kinds only");
      const Complex a = p.get("a"), b = p.get("b");
      if (std::abs(b) == 0.0) throw Error(Errc::ConstraintViolation, "row 8 needs b != 0");
      const BranchedComplex bz = BranchedComplex::principal(b) * z;
      rhs = uq(UqPoint{0.0, a / b, bz, kind}, UqMethod::MellinBarnes, ctx);
      note = "Mellin-Barnes evaluation of U(0, a/b; bz)";
      return qlaplace(
          kind, [a, b, &ctx](Complex t) { return log_qpoch_inf(-a * t, ctx) - log_qpoch_inf(-b * t, ctx); }, z, ctx);
    }
    case 9: {
      const int n = static_cast<int>(p.real("n"));
      const Complex qmn = std::pow(q, -n);
      rhs = qpoch_n(z.value(), n, ctx);
      const PhiParams params{{qmn}, {0.0}};
      const Real qn = std::pow(q, n);
      return qlaplace(kind, [params, qn, &ctx](Complex t) { return std::log(phi(params, -t * qn, ctx)); }, z, ctx);
    }
    case 10: {
      const int rs = static_cast<int>(p.get_or("r_s", 0.0).real());
      const Complex b = p.get("b");
      PhiParams lhs_params, rhs_params;
      if (rs == 0) {
        const Complex a = p.get("a");
        lhs_params = {{a}, {b, 0.0}};
        rhs_params = {{a}, {b}};
      } else if (rs == 1) {
        lhs_params = {{}, {b, 0.0}};
        rhs_params = {{}, {b}};
      } else {
        throw Error(Errc::ConstraintViolation, "r_s must be 0 for (1,1) or 1 for (0,1)");
      }
      rhs = phi(rhs_params, z.value(), ctx);
      note = rs == 0 ? "1phi2 -> 1phi1" : "0phi2 -> 0phi1";
      return qlaplace(kind, [lhs_params, &ctx](Complex t) { return std::log(phi(lhs_params, -t, ctx)); }, z, ctx);
    }
    default:
      throw Error(Errc::ConstraintViolation, "transform table rows are 1..10");
  }
}

}  // namespace

TransformKind TransformKind::Discrete(Complex lambda, const QContext& ctx) {
  if (on_negative_lattice(lambda, ctx)) throw Error(Errc::PoleAtParameter, "lambda on excluded lattice -q^n");
  return TransformKind(Tag::Discrete, lambda);
}

KernelKind TransformKind::kernel() const {
  switch (tag_) {
    case Tag::E:
      return KernelKind::E;
    case Tag::Theta:
      return KernelKind::Theta;
    default:
      throw Error(Errc::ConstraintViolation, "the discrete transform has no continuous kernel");
  }
}

std::string TransformKind::name() const {
  switch (tag_) {
    case Tag::E:
      return "E";
    case Tag::Theta:
      return "theta";
    default:
      return "lambda";
  }
}

TransformKind kind_param(const ParamRecord& point, const QContext& ctx) {
  const int k = static_cast<int>(point.get_or("kind", 0.0).real());
  switch (k) {
    case 0:
      return TransformKind::E();
    case 1:
      return TransformKind::Theta();
    case 2:
      return TransformKind::Discrete(point.get_or("lambda", 1.0), ctx);
    default:
      throw Error(Errc::ConstraintViolation, "kind must be 0 (E), 1 (theta) or 2 (discrete)");
  }
}

ParamRecord& set_kind(ParamRecord& point, const TransformKind& kind) {
  point.set("kind", Real(static_cast<int>(kind.tag())));
  if (kind.discrete()) point.set("lambda", kind.lambda());
  return point;
}

Complex qlaplace(const TransformKind& kind, const LogFn& log_B, const BranchedComplex& z, const QContext& ctx) {
  if (kind.discrete()) return bilateral_lattice_sum(log_B, kind.lambda(), z.value(), ctx).value;
  const KernelKind k = kind.kernel();
  return integrate_halfline(log_B, z, k, ctx).value;
}

VerificationReport table1_verify(int row, const ParamRecord& point, const QContext& ctx, Real tol) {
  const TransformKind kind = kind_param(point, ctx);
  const BranchedComplex z = branched_param(point, "z");
  Complex rhs;
  std::string note;
  const Complex lhs = row_value(row, point, kind, z, rhs, note, ctx);
  return make_report("table1.row" + std::to_string(row), point, lhs, rhs, tol, note);
}

Complex sw_orthogonality(const TransformKind& kind, int n, int m, const QContext& ctx) {
  if (n < 0 || m < 0) throw Error(Errc::InvalidN, "Stieltjes-Wigert degrees must be non-negative");
  const LogFn weight = [n, m, &ctx](Complex x) {
    return std::log(x * stieltjes_wigert(n, x, ctx) * stieltjes_wigert(m, x, ctx));
  };
  return qlaplace(kind, weight, BranchedComplex::positive(1.0), ctx);
}

}  // namespace qresum
