#pragma once

// The three q-Laplace transforms, the transform table checks and the
// Stieltjes-Wigert orthogonality relations.

#include <string>

#include "qresum/context.hpp"
#include "qresum/quad.hpp"
#include "qresum/report.hpp"
#include "qresum/types.hpp"

namespace qresum {

/// E | Theta | Discrete(lambda).
class TransformKind {
 public:
  enum class Tag { E, Theta, Discrete };

  static TransformKind E() { return TransformKind(Tag::E, 0.0); }
  static TransformKind Theta() { return TransformKind(Tag::Theta, 0.0); }
  /// Throws PoleAtParameter when lambda lies on -q^Z.
  static TransformKind Discrete(Complex lambda, const QContext& ctx);

  Tag tag() const noexcept { return tag_; }
  bool discrete() const noexcept { return tag_ == Tag::Discrete; }
  Complex lambda() const noexcept { return lambda_; }
  /// Continuous kernel; throws ConstraintViolation for Discrete.
  KernelKind kernel() const;
  std::string name() const;

 private:
  TransformKind(Tag tag, Complex lambda) : tag_(tag), lambda_(lambda) {}
  Tag tag_;
  Complex lambda_;
};

/// Reads "kind" (0 = E, 1 = Theta, 2 = Discrete) and "lambda" from a record.
TransformKind kind_param(const ParamRecord& point, const QContext& ctx);
ParamRecord& set_kind(ParamRecord& point, const TransformKind& kind);

/// (L_k B)(z). E and Theta depend on the sheet of z; Discrete only on its value.
Complex qlaplace(const TransformKind& kind, const LogFn& log_B, const BranchedComplex& z, const QContext& ctx);

/// Row 1..10 of the transform table at `point`.
///
/// Point entries: kind, lambda, z (+ z_arg), and per row: n (rows 1, 4, 9),
/// probe 0..2 (rows 1-3), a, b (rows 5-8), r_s 0 = (1,1) / 1 = (0,1) with
/// a, b (row 10). Rows 5-7 need b < z < 1/a; row 8 is defined for E and
/// Theta only.
VerificationReport table1_verify(int row, const ParamRecord& point, const QContext& ctx, Real tol = 1e-8);

/// Weighted sum/integral of S_n S_m with the kind's measure; equals
/// delta_{nm} / (q^n (q;q)_n).
Complex sw_orthogonality(const TransformKind& kind, int n, int m, const QContext& ctx);

}  // namespace qresum
