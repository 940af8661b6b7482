#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qresum {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Real kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class Errc {
  OutOfRange,
  TruncationFailure,
  PoleAtParameter,
  ConstraintViolation,
  DivergentSeries,
  NoConvergence,
  PoleOnRay,
  BadAbscissa,
  PoleAtLattice,
  InvalidN,
  ZeroDivision,
  GrowthViolation,
  UnknownSuite,
  UnknownIdentity,
};

const char* to_string(Errc code);

// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A point on the Riemann surface of the logarithm.
///
/// The argument is kept unwrapped, so `z` and `z * e^{2 pi i}` are different
/// points even though their complex values coincide. All multivalued
/// functions (E_q, P_q, powers z^w, ln z) read the argument from here.
class BranchedComplex {
 public:
  BranchedComplex() = default;
  BranchedComplex(Real modulus, Real arg);

  /// Principal-branch promotion of an ordinary complex number.
  static BranchedComplex principal(Complex z);
  /// Promotion of a positive real.
  static BranchedComplex positive(Real x) { return {x, 0.0}; }
  /// The point whose logarithm is `log_value`.
  static BranchedComplex from_log(Complex log_value);

  Real modulus() const noexcept { return modulus_; }
  Real arg() const noexcept { return arg_; }

  Complex value() const { return std::polar(modulus_, arg_); }
  Complex log() const { return {std::log(modulus_), arg_}; }

  /// z^w on this sheet.
  Complex pow(Complex w) const { return std::exp(w * log()); }

  /// z * e^{i angle}; angle = 2 pi moves one sheet up.
  BranchedComplex rotated(Real angle) const { return {modulus_, arg_ + angle}; }
  BranchedComplex scaled(Real factor) const;  // factor > 0
  BranchedComplex inverse() const { return {1.0 / modulus_, -arg_}; }

  friend BranchedComplex operator*(const BranchedComplex& x, const BranchedComplex& y) {
    return {x.modulus_ * y.modulus_, x.arg_ + y.arg_};
  }
  friend BranchedComplex operator/(const BranchedComplex& x, const BranchedComplex& y) {
    return {x.modulus_ / y.modulus_, x.arg_ - y.arg_};
  }

 private:
  Real modulus_ = 1.0;
  Real arg_ = 0.0;
};

}  // namespace qresum
