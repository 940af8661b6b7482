#include "qresum/types.hpp"

#include <cmath>

namespace qresum {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::TruncationFailure: return "TruncationFailure";
    case Errc::PoleAtParameter: return "PoleAtParameter";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::DivergentSeries: return "DivergentSeries";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PoleOnRay: return "PoleOnRay";
    case Errc::BadAbscissa: return "BadAbscissa";
    case Errc::PoleAtLattice: return "PoleAtLattice";
    case Errc::InvalidN: return "InvalidN";
    case Errc::ZeroDivision: return "ZeroDivision";
    case Errc::GrowthViolation: return "GrowthViolation";
    case Errc::UnknownSuite: return "UnknownSuite";
    case Errc::UnknownIdentity: return "UnknownIdentity";
  }
  return "Unknown";
}

BranchedComplex::BranchedComplex(Real modulus, Real arg) : modulus_(modulus), arg_(arg) {
  if (!(modulus > 0.0) || !std::isfinite(modulus) || !std::isfinite(arg)) {
    throw Error(Errc::OutOfRange, "branched point needs a finite positive modulus and finite argument");
  }
}

BranchedComplex BranchedComplex::principal(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::OutOfRange, "non-finite complex input");
  }
  return {std::abs(z), std::arg(z)};
}

BranchedComplex BranchedComplex::from_log(Complex log_value) {
  return {std::exp(log_value.real()), log_value.imag()};
}

BranchedComplex BranchedComplex::scaled(Real factor) const {
  if (!(factor > 0.0)) throw Error(Errc::OutOfRange, "scale factor must be positive");
  return {modulus_ * factor, arg_};
}

}  // namespace qresum
