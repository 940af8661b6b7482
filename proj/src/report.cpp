#include "qresum/report.hpp"

#include <algorithm>
#include <cmath>

namespace qresum {

ParamRecord& ParamRecord::set(const std::string& name, Complex value) {
  for (auto& [key, v] : entries_) {
    if (key == name) {
      v = value;
      return *this;
    }
  }
  entries_.emplace_back(name, value);
  return *this;
}

bool ParamRecord::has(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
}

Complex ParamRecord::get(const std::string& name) const {
  for (const auto& [key, v] : entries_) {
    if (key == name) return v;
  }
  throw Error(Errc::ConstraintViolation, "parameter '" + name + "' missing from point");
}

VerificationReport make_report(std::string id, ParamRecord point, Complex lhs, Complex rhs, Real tol,
                               std::string note, Real zero_scale) {
  VerificationReport r;
  r.identity_id = std::move(id);
  r.point = std::move(point);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / std::max({std::abs(lhs), std::abs(rhs), kRelErrFloor});
  if (zero_scale > 0.0) {
    r.rel_err = r.abs_err / zero_scale;
    r.pass = r.abs_err <= tol * zero_scale;
  } else {
    r.pass = r.rel_err <= tol;
  }
  if (!std::isfinite(r.abs_err)) r.pass = false;
  r.note = std::move(note);
  return r;
}

}  // namespace qresum
