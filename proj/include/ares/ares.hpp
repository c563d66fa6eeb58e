#pragma once

// Adaptive receding-horizon plan synthesis: n clones of the MDP advance
// through cost levels; each level is attempted with a growing horizon h and,
// when all horizons fail, a growing swarm size p.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ares/errors.hpp"
#include "ares/mdp.hpp"
#include "ares/parallel.hpp"
#include "ares/pso.hpp"
#include "ares/rng.hpp"

namespace ares {

struct AresParams {
  double phi = 1e-3;       // success threshold on the cost
  int max_levels = 20;     // m
  int clones = 20;         // n
  int max_horizon = 5;     // h_max
  int particles_start = 10;
  int particles_increment = 5;
  int particles_max = 40;

  void validate() const;
};

/// Required cost decrease at level i for a clone whose previous-level cost
/// is `previous_cost`: previous_cost / (m - i + 1).
double dynamic_threshold(double previous_cost, int max_levels, int level);

/// True iff best_cost < previous_level - threshold, evaluated in that form
/// so that the decrease property of committed levels holds as written.
bool next_level_check(double previous_level, double best_cost, double threshold);

/// Indices of clones in ascending (cost, id) order.
std::vector<std::size_t> rank_by_cost(const std::vector<double>& costs);

/// Slot-wise resampling map: result[k] is the clone whose content slot k
/// receives. The first ceil(n/2) ranks keep their own content; every other
/// slot copies a uniformly chosen member of that successful set.
std::vector<std::size_t> resample_sources(const std::vector<double>& costs, Rng& rng);

template <class State>
struct CloneState {
  int id = 0;
  State state;
  double cost = 0.0;           // cost of `state`
  double previous_cost = 0.0;  // cost at the last committed level
  double threshold = 0.0;      // required decrease for the next level
  NodePtr<State> history;
};

/// Replaces unsuccessful clones with copies of successful ones. Ids stay
/// with their slots; everything else is copied.
template <class State>
std::vector<CloneState<State>> resample(const std::vector<CloneState<State>>& clones, Rng& rng) {
  if (clones.empty()) throw InputError("resample: empty clone list");
  std::vector<double> costs(clones.size());
  for (std::size_t k = 0; k < clones.size(); ++k) costs[k] = clones[k].cost;
  const auto sources = resample_sources(costs, rng);
  std::vector<CloneState<State>> out;
  out.reserve(clones.size());
  for (std::size_t k = 0; k < clones.size(); ++k) {
    CloneState<State> c = clones[sources[k]];
    c.id = clones[k].id;
    out.push_back(std::move(c));
  }
  return out;
}

struct LevelRecord {
  int level = 0;
  double value = 0.0;      // l_i
  double threshold = 0.0;  // Delta_1 used to admit the level
  int horizon = 0;
  int particles = 0;
  std::vector<double> clone_costs;  // per clone, after Simulate
};

/// One Simulate call: a row of the level log.
struct AttemptRecord {
  int level = 0;           // level being attempted
  double previous = 0.0;   // l_{i-1}
  double threshold = 0.0;  // Delta_1
  int horizon = 0;
  int particles = 0;
  double best_cost = 0.0;
  double wall_ms = 0.0;    // since the start of planning
};

template <class State>
struct AresOutcome {
  bool success = false;
  std::optional<Plan<State>> plan;
  State final_state{};  // minimum-cost clone at the last committed level
  std::vector<LevelRecord> levels;
  std::vector<AttemptRecord> attempts;
  double wall_seconds = 0.0;
  double mean_horizon = 0.0;
  double final_cost = 0.0;
  bool budget_exhausted = false;

  std::size_t total_actions() const { return plan ? plan->total_actions() : 0; }
};

template <class State>
struct SimulateResult {
  ActionSequence actions;
  double cost = 0.0;
  State successor;
};

struct AresOptions {
  PsoParams pso;  // `particles` is overridden by the schedule
  int workers = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Runs one PSO per clone over h-step action sequences and returns, per
/// clone, the best sequence, its reached state, and that state's cost.
/// Clone k draws from clone_seed_stream(seed, id, level, attempt).
template <Mdp M>
std::vector<SimulateResult<typename M::State>> simulate(
    const std::vector<CloneState<typename M::State>>& clones, const M& mdp, int horizon,
    int particles, std::uint64_t seed, int level, int attempt, const AresOptions& options = {}) {
  using State = typename M::State;
  if (horizon < 1) throw InputError("simulate: horizon must be at least 1");
  if (particles < 2) throw InputError("simulate: need at least two particles");
  const Eigen::Index dim = mdp.action_dim();
  const ActionBox box = mdp.action_box();
  Bounds bounds{box.lower.replicate(horizon, 1), box.upper.replicate(horizon, 1)};
  PsoParams pso = options.pso;
  pso.particles = particles;

  std::vector<SimulateResult<State>> results(clones.size());
  parallel_for(clones.size(), options.workers, [&](std::size_t k) {
    const auto& clone = clones[k];
    auto decode = [&](const Eigen::VectorXd& x) {
      return Eigen::Map<const ActionSequence>(x.data(), dim, horizon);
    };
    Objective objective = [&](const Eigen::VectorXd& x) {
      return mdp.cost(rollout(mdp, clone.state, decode(x)));
    };
    Rng rng = clone_seed_stream(seed, static_cast<std::uint64_t>(clone.id),
                                static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(attempt));
    PsoResult best;
    try {
      best = optimize(objective, bounds, pso, rng);
    } catch (const OptimizationError& e) {
      throw OptimizationError("clone " + std::to_string(clone.id) + ": " + e.what(), e.position());
    }
    SimulateResult<State> r;
    r.actions = decode(best.position);
    r.successor = rollout(mdp, clone.state, r.actions);
    r.cost = mdp.cost(r.successor);
    results[k] = std::move(r);
  });
  return results;
}

/// Synthesises a plan taking `initial` to a state of cost <= phi.
template <Mdp M>
AresOutcome<typename M::State> ares_plan(const M& mdp, const typename M::State& initial,
                                         const AresParams& params, std::uint64_t seed,
                                         const AresOptions& options = {}) {
  using State = typename M::State;
  using Clock = std::chrono::steady_clock;
  params.validate();
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  AresOutcome<State> out;
  const double initial_cost = mdp.cost(initial);
  const auto root = make_root(initial, initial_cost);
  std::vector<CloneState<State>> clones(static_cast<std::size_t>(params.clones));
  for (int k = 0; k < params.clones; ++k) {
    auto& c = clones[static_cast<std::size_t>(k)];
    c.id = k;
    c.state = initial;
    c.cost = initial_cost;
    c.previous_cost = initial_cost;
    c.threshold = dynamic_threshold(initial_cost, params.max_levels, 1);
    c.history = root;
  }

  double level_value = initial_cost;
  int level = 1;
  int horizon = 1;
  int particles = params.particles_start;
  int attempt = 0;
  Rng resample_rng(derive_seed(seed, 0x5245u));

  while (level_value > params.phi && level <= params.max_levels) {
    if (options.deadline && Clock::now() >= *options.deadline) {
      out.budget_exhausted = true;
      break;
    }
    auto sims = simulate(clones, mdp, horizon, particles, seed, level, attempt++, options);
    std::vector<double> costs(sims.size());
    for (std::size_t k = 0; k < sims.size(); ++k) costs[k] = sims[k].cost;
    const std::size_t best = rank_by_cost(costs).front();
    const double delta1 = clones[best].threshold;
    out.attempts.push_back({level, level_value, delta1, horizon, particles, costs[best], elapsed_ms()});

    if (next_level_check(level_value, costs[best], delta1)) {
      for (std::size_t k = 0; k < clones.size(); ++k) {
        auto& c = clones[k];
        c.history = extend(c.history, std::move(sims[k].actions), sims[k].successor, sims[k].cost, level);
        c.state = std::move(sims[k].successor);
        c.cost = sims[k].cost;
      }
      out.levels.push_back({level, costs[best], delta1, horizon, particles, costs});
      level_value = costs[best];
      ++level;
      horizon = 1;
      particles = params.particles_start;
      attempt = 0;
      clones = resample(clones, resample_rng);
      for (auto& c : clones) {
        c.previous_cost = c.cost;
        c.threshold = level <= params.max_levels ? dynamic_threshold(c.cost, params.max_levels, level) : 0.0;
      }
    } else if (horizon < params.max_horizon) {
      ++horizon;
    } else if (particles < params.particles_max) {
      horizon = 1;
      particles = std::min(particles + params.particles_increment, params.particles_max);
    } else {
      break;
    }
  }

  std::vector<double> costs(clones.size());
  for (std::size_t k = 0; k < clones.size(); ++k) costs[k] = clones[k].cost;
  const auto& winner = clones[rank_by_cost(costs).front()];
  out.final_cost = winner.cost;
  out.final_state = winner.state;
  out.success = winner.cost <= params.phi;
  if (out.success) out.plan = extract_plan(winner.history);
  if (!out.levels.empty()) {
    double sum = 0;
    for (const auto& l : out.levels) sum += l.horizon;
    out.mean_horizon = sum / static_cast<double>(out.levels.size());
  }
  out.wall_seconds = elapsed_ms() / 1000.0;
  return out;
}

}  // namespace ares
