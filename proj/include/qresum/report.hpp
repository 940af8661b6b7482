#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qresum/types.hpp"

namespace qresum {

/// Named parameter values describing one check; insertion order is kept.
class ParamRecord {
 public:
  ParamRecord() = default;
  ParamRecord(std::initializer_list<std::pair<std::string, Complex>> init) : entries_(init) {}

  ParamRecord& set(const std::string& name, Complex value);
  bool has(const std::string& name) const;
  /// Throws ConstraintViolation when the entry is missing.
  Complex get(const std::string& name) const;
  Real real(const std::string& name) const { return get(name).real(); }
  Complex get_or(const std::string& name, Complex fallback) const { return has(name) ? get(name) : fallback; }

  const std::vector<std::pair<std::string, Complex>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Complex>> entries_;
};

struct VerificationReport {
  std::string identity_id;
  ParamRecord point;
  Complex lhs{0.0};
  Complex rhs{0.0};
  Real abs_err = 0.0;
  Real rel_err = 0.0;
  bool pass = false;
  std::string note;
};

inline constexpr Real kRelErrFloor = 1e-300;

/// Builds a report with rel_err = |lhs - rhs| / max(|lhs|, |rhs|, 1e-300).
/// When `zero_scale` > 0 the true value is zero, rel_err is taken relative to
/// zero_scale and the check passes iff abs_err <= tol * zero_scale.
VerificationReport make_report(std::string id, ParamRecord point, Complex lhs, Complex rhs, Real tol,
                               std::string note = {}, Real zero_scale = 0.0);

}  // namespace qresum
