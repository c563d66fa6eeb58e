#pragma once

// Deterministic MDP contract, rollout, and plan backtracking.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ares/errors.hpp"

namespace ares {

using Action = Eigen::VectorXd;

/// One column per step; rows are the MDP's action dimensionality.
using ActionSequence = Eigen::MatrixXd;

/// Per-coordinate box for a single step's action.
struct ActionBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// A deterministic MDP: `step` and `cost` must be pure, and `cost` must be
/// finite and nonnegative on every reachable state.
template <class M>
concept Mdp = requires(const M& m, const typename M::State& s,
                       const Eigen::Ref<const Eigen::VectorXd>& a) {
  typename M::State;
  { m.action_dim() } -> std::convertible_to<Eigen::Index>;
  { m.step(s, a) } -> std::convertible_to<typename M::State>;
  { m.cost(s) } -> std::convertible_to<double>;
  { m.action_box() } -> std::convertible_to<ActionBox>;
};

template <Mdp M>
typename M::State rollout(const M& mdp, const typename M::State& state,
                          const Eigen::Ref<const ActionSequence>& actions) {
  if (actions.cols() > 0 && actions.rows() != mdp.action_dim()) {
    throw InputError("rollout: action has dimension " + std::to_string(actions.rows()) +
                     ", MDP expects " + std::to_string(mdp.action_dim()));
  }
  typename M::State s = state;
  for (Eigen::Index t = 0; t < actions.cols(); ++t) s = mdp.step(s, actions.col(t));
  return s;
}

/// A committed point of a clone's history. Nodes are shared between clones
/// after resampling and never mutated once linked.
template <class State>
struct TrajectoryNode {
  State state;
  ActionSequence incoming;  // empty for the root
  std::shared_ptr<const TrajectoryNode> predecessor;
  double cost = 0.0;
  int level = 0;

  bool is_root() const { return predecessor == nullptr; }
};

template <class State>
using NodePtr = std::shared_ptr<const TrajectoryNode<State>>;

template <class State>
NodePtr<State> make_root(State state, double cost) {
  return std::make_shared<const TrajectoryNode<State>>(
      TrajectoryNode<State>{std::move(state), ActionSequence(), nullptr, cost, 0});
}

template <class State>
NodePtr<State> extend(const NodePtr<State>& from, ActionSequence block, State state, double cost,
                      int level) {
  return std::make_shared<const TrajectoryNode<State>>(
      TrajectoryNode<State>{std::move(state), std::move(block), from, cost, level});
}

template <class State>
struct Plan {
  State initial_state;
  std::vector<ActionSequence> blocks;  // one per committed level
  State final_state;
  double final_cost = 0.0;

  std::size_t total_actions() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += static_cast<std::size_t>(b.cols());
    return n;
  }

  ActionSequence concatenated(Eigen::Index action_dim) const {
    ActionSequence all(action_dim, static_cast<Eigen::Index>(total_actions()));
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
      all.middleCols(c, b.cols()) = b;
      c += b.cols();
    }
    return all;
  }
};

/// Walks predecessor links back to the root and returns the actions in
/// root-to-final order, one block per committed level.
template <class State>
Plan<State> extract_plan(const NodePtr<State>& final_node) {
  if (!final_node) throw InputError("extract_plan: null trajectory node");
  std::vector<const TrajectoryNode<State>*> chain;
  std::unordered_set<const TrajectoryNode<State>*> seen;
  for (const TrajectoryNode<State>* n = final_node.get(); n; n = n->predecessor.get()) {
    if (!seen.insert(n).second) throw InternalError("extract_plan: cyclic predecessor chain");
    chain.push_back(n);
  }
  const auto* root = chain.back();
  Plan<State> plan{root->state, {}, final_node->state, final_node->cost};
  plan.blocks.reserve(chain.size() - 1);
  for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) plan.blocks.push_back((*it)->incoming);
  return plan;
}

/// Final state and cost obtained by replaying every block from the
/// initial state.
template <Mdp M>
std::pair<typename M::State, double> replay(const M& mdp, const Plan<typename M::State>& plan) {
  typename M::State s = plan.initial_state;
  for (const auto& block : plan.blocks) s = rollout(mdp, s, block);
  const double c = mdp.cost(s);
  return {std::move(s), c};
}

/// x' = x + a with a in [-1, 1] and J(x) = |x|. Small enough to brute-force.
class Integrator1D {
 public:
  using State = double;

  Eigen::Index action_dim() const { return 1; }
  State step(State x, const Eigen::Ref<const Eigen::VectorXd>& a) const { return x + a(0); }
  double cost(State x) const { return std::abs(x); }
  ActionBox action_box() const {
    return {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
  }
};

}  // namespace ares
