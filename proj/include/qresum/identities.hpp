#pragma once

// Evaluators for the theta, E_q and P_q identities. Each evaluator computes
// its two sides through different series or closed forms.

#include <string>
#include <vector>

#include "qresum/context.hpp"
#include "qresum/report.hpp"

namespace qresum {

/// Identity tags accepted by identity_eval.
const std::vector<std::string>& identity_ids();

/// Evaluates identity `id` at `point`.
///
/// Branched arguments are read as `name` (complex value) plus an optional
/// `name_arg` entry holding the unwrapped argument. Throws UnknownIdentity
/// for unregistered ids and ConstraintViolation when the point violates the
/// identity's hypothesis.
VerificationReport identity_eval(const std::string& id, const ParamRecord& point, const QContext& ctx,
                                 Real tol = 1e-9);

/// A small grid of admissible points for `id` (q is taken from the context).
std::vector<ParamRecord> identity_default_grid(const std::string& id, const QContext& ctx);

/// Reads a branched point from a record (see identity_eval).
BranchedComplex branched_param(const ParamRecord& point, const std::string& name);

}  // namespace qresum
