#include "ares/verify.hpp"

#include "ares/config.hpp"
#include "ares/flock_mdp.hpp"

namespace ares {

namespace {

template <Mdp M>
ReplayReport check(const M& mdp, const PlanDocument<typename M::State>& doc) {
  const auto& plan = doc.plan;
  const auto [state, cost] = replay(mdp, plan);
  ReplayReport r;
  r.stored_cost = plan.final_cost;
  r.replayed_cost = cost;
  r.levels = plan.blocks.size();
  r.actions = plan.total_actions();
  if (cost != plan.final_cost || !(state == plan.final_state)) {
    r.status = ReplayStatus::Mismatch;
    r.message = "stored cost " + format_double(plan.final_cost) + ", replayed " + format_double(cost);
  } else if (doc.header.success && !(cost <= doc.header.phi)) {
    r.status = ReplayStatus::AboveThreshold;
    r.message = "plan claims success but cost " + format_double(cost) + " exceeds phi " +
                format_double(doc.header.phi);
  }
  return r;
}

}  // namespace

ReplayReport verify_plan(const json& doc, const EvalParams& params) {
  const PlanHeader header = plan_header_from_json(doc);
  if (header.mdp == "integrator") return check(Integrator1D{}, plan_from_json<double>(doc));
  if (header.mdp != "flock") throw InputError("unknown mdp '" + header.mdp + "'");

  const std::string digest = params_digest(params);
  if (header.params_digest != digest) {
    ReplayReport r;
    r.status = ReplayStatus::DigestMismatch;
    r.message = "params digest mismatch: plan " + header.params_digest + ", config " + digest;
    return r;
  }
  const auto parsed = plan_from_json<FlockConfig>(doc);
  return check(FlockMdp(parsed.plan.initial_state.birds(), params.flock), parsed);
}

}  // namespace ares
