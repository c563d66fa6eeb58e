#pragma once

// Run configuration: a JSON object of flat dotted keys (flock.v_max,
// ares.h_max, eval.epsilon, ...). Unknown keys are rejected. Command-line
// flags are applied on top of the file.

#include <string>

#include <json.hpp>

#include "ares/eval.hpp"

namespace ares {

struct OutputPaths {
  std::string plan = "plan.json";
  std::string levels;   // level log CSV; derived from `plan` when empty
  std::string records = "records.csv";
  std::string summary = "summary.json";
};

struct RunConfig {
  EvalParams eval;  // holds flock, ares, pso, and evaluation settings
  OutputPaths output;
};

/// Applies every key of `flat` to `config`. Throws InputError naming the
/// first unknown or ill-typed key.
void apply_config(RunConfig& config, const nlohmann::json& flat);

RunConfig load_config(const std::string& path);

/// The recognised keys, in a stable order.
const std::vector<std::string>& config_keys();

/// 64-bit FNV-1a over every physics and algorithm parameter, as 16 hex
/// digits. Plans carry it so that replay can refuse a different setup.
std::string params_digest(const FlockParams& flock, const AresParams& ares, const PsoParams& pso);

inline std::string params_digest(const EvalParams& e) { return params_digest(e.flock, e.ares, e.pso); }

}  // namespace ares
