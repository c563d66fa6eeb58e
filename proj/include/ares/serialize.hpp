#pragma once

// JSON and CSV formats: flock configurations, plans, level logs,
// experiment records, and evaluation summaries.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ares/ares.hpp"
#include "ares/eval.hpp"
#include "ares/flock.hpp"
#include "ares/mdp.hpp"

namespace ares {

using json = nlohmann::json;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

void to_json(json& j, const FlockConfig& c);
void from_json(const json& j, FlockConfig& c);

struct PlanHeader {
  std::string mdp = "flock";  // "flock" or "integrator"
  bool success = false;
  double phi = 0.0;
  std::uint64_t seed = 0;
  std::string params_digest;
};

template <class State>
struct PlanDocument {
  PlanHeader header;
  Plan<State> plan;
};

/// {mdp, success, phi, seed, params_digest, initial_state, final_state,
///  final_cost, levels: [{horizon, actions: [[...], ...]}]}; each inner
/// array is one step's action vector (ax0, ay0, ax1, ay1, ... for a flock).
template <class State>
json plan_to_json(const PlanHeader& header, const Plan<State>& plan) {
  json levels = json::array();
  for (const auto& block : plan.blocks) {
    json steps = json::array();
    for (Eigen::Index t = 0; t < block.cols(); ++t) {
      json step = json::array();
      for (Eigen::Index d = 0; d < block.rows(); ++d) step.push_back(block(d, t));
      steps.push_back(std::move(step));
    }
    levels.push_back({{"horizon", block.cols()}, {"actions", std::move(steps)}});
  }
  return {{"mdp", header.mdp},
          {"success", header.success},
          {"phi", header.phi},
          {"seed", header.seed},
          {"params_digest", header.params_digest},
          {"initial_state", plan.initial_state},
          {"final_state", plan.final_state},
          {"final_cost", plan.final_cost},
          {"levels", std::move(levels)}};
}

PlanHeader plan_header_from_json(const json& j);

template <class State>
PlanDocument<State> plan_from_json(const json& j) {
  PlanDocument<State> doc;
  doc.header = plan_header_from_json(j);
  doc.plan.initial_state = j.at("initial_state").get<State>();
  doc.plan.final_state = j.contains("final_state") ? j.at("final_state").get<State>()
                                                   : doc.plan.initial_state;
  doc.plan.final_cost = j.at("final_cost").get<double>();
  for (const auto& level : j.at("levels")) {
    const auto& steps = level.at("actions");
    const auto horizon = level.at("horizon").get<Eigen::Index>();
    if (horizon != static_cast<Eigen::Index>(steps.size()) || steps.empty())
      throw InputError("plan: level horizon does not match its action count");
    const auto dim = static_cast<Eigen::Index>(steps.front().size());
    ActionSequence block(dim, horizon);
    for (Eigen::Index t = 0; t < horizon; ++t) {
      const auto& step = steps.at(static_cast<std::size_t>(t));
      if (static_cast<Eigen::Index>(step.size()) != dim)
        throw InputError("plan: ragged action arrays");
      for (Eigen::Index d = 0; d < dim; ++d) block(d, t) = step.at(static_cast<std::size_t>(d)).get<double>();
    }
    doc.plan.blocks.push_back(std::move(block));
  }
  return doc;
}

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// level,ell,delta1,h,p,best_cost,wall_ms; one row per Simulate call.
void write_level_log(std::ostream& os, const std::vector<AttemptRecord>& attempts);

enum class Timing { Include, Omit };

/// index,seed,Z,cost,time_s,levels,actions,mean_h,budget_exhausted. With
/// Timing::Omit the time_s field is left empty so that runs can be compared
/// byte for byte.
void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records,
                       Timing timing = Timing::Include);

json summary_to_json(const SummaryTable& table, std::int64_t samples_run);

/// Two-cohort text table in the layout of the usual results overview.
void print_summary(std::ostream& os, const SummaryTable& table);

/// iteration,best_cost
void write_pso_trace(std::ostream& os, const std::vector<double>& trace);

}  // namespace ares
