#pragma once

// Plan verification: replays a stored plan from its initial state and checks
// the recorded outcome bit for bit.

#include <cstddef>
#include <string>

#include "ares/eval.hpp"
#include "ares/serialize.hpp"

namespace ares {

enum class ReplayStatus { Ok, DigestMismatch, Mismatch, AboveThreshold };

struct ReplayReport {
  ReplayStatus status = ReplayStatus::Ok;
  double stored_cost = 0.0;
  double replayed_cost = 0.0;
  std::size_t levels = 0;
  std::size_t actions = 0;
  std::string message;  // empty when status is Ok

  bool ok() const { return status == ReplayStatus::Ok; }
};

/// Flock plans must carry the digest of `params`; integrator plans ignore it.
/// Throws InputError for malformed documents or an unknown MDP.
ReplayReport verify_plan(const json& doc, const EvalParams& params);

}  // namespace ares
