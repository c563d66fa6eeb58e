#pragma once

#include "ares/flock.hpp"
#include "ares/mdp.hpp"

namespace ares {

/// The flock as a deterministic MDP. An action is the flock-wide
/// acceleration flattened bird by bird (ax0, ay0, ax1, ay1, ...); it is
/// projected onto the acceleration constraint before every step.
class FlockMdp {
 public:
  using State = FlockConfig;

  FlockMdp(Eigen::Index birds, FlockParams params) : birds_(birds), params_(params) {
    if (birds < 1) throw InputError("FlockMdp: need at least one bird");
    params_.validate();
  }

  Eigen::Index birds() const { return birds_; }
  const FlockParams& params() const { return params_; }

  Eigen::Index action_dim() const { return 2 * birds_; }

  State step(const State& s, const Eigen::Ref<const Eigen::VectorXd>& a) const {
    if (a.size() != action_dim() || s.birds() != birds_)
      throw InputError("FlockMdp::step: dimension mismatch");
    const FlockAction raw = Eigen::Map<const FlockAction>(a.data(), 2, birds_);
    return flock_step(s, project_action(raw, s, params_), params_);
  }

  double cost(const State& s) const { return fitness(s, params_); }

  /// The PSO box; the disc constraint itself is enforced by the projection.
  ActionBox action_box() const {
    const double bound = params_.rho * params_.v_max;
    return {Eigen::VectorXd::Constant(action_dim(), -bound),
            Eigen::VectorXd::Constant(action_dim(), bound)};
  }

 private:
  Eigen::Index birds_;
  FlockParams params_;
};

static_assert(Mdp<FlockMdp>);
static_assert(Mdp<Integrator1D>);

}  // namespace ares
