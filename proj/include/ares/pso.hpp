#pragma once

// Particle swarm optimizer with random neighbourhoods, box bounds, adaptive
// inertia, and iteration/stall termination.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ares/rng.hpp"

namespace ares {

struct PsoParams {
  int particles = 10;
  double inertia_max = 1.1;
  double inertia_min = 0.1;
  double inertia_decay = 0.97;  // applied to the inertia on every stalled iteration
  double self_adjustment = 1.49;
  double social_adjustment = 1.49;
  int max_iterations = 400;
  int stall_iterations = 40;
  double min_neighbors_fraction = 0.25;
  double improvement_tolerance = 1e-9;

  void validate() const;
};

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const { return lower.size(); }
  void validate() const;

  static Bounds uniform(Eigen::Index dim, double lo, double hi) {
    return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
  }
};

struct Particle {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  Eigen::VectorXd best_position;
  double best_cost;
  std::vector<int> neighbors;
};

struct Swarm {
  std::vector<Particle> particles;
  Bounds bounds;
  double inertia;
};

/// Positions uniform in the box, velocities uniform in +-(hi - lo) per
/// coordinate, personal bests at the start positions (cost +inf until
/// evaluated), and a random neighbourhood per particle.
Swarm init_swarm(Rng& rng, const Bounds& bounds, const PsoParams& params);

/// Velocity/position update for one particle. u1 and u2 are per-coordinate
/// random factors in [0, 1]. Coordinates that leave the box are clipped and
/// their velocity zeroed.
Particle update_particle(const Particle& particle, const Eigen::VectorXd& neighborhood_best,
                         const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, double inertia,
                         const PsoParams& params, const Bounds& bounds);

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct PsoResult {
  Eigen::VectorXd position;
  double cost;
  int iterations;
  std::vector<double> trace;  // global best after initialisation and after each iteration
};

struct PsoOptions {
  int workers = 1;  // concurrent objective evaluations per iteration
};

/// Minimises `objective` over the box. Throws OptimizationError when the
/// objective returns a non-finite value.
PsoResult optimize(const Objective& objective, const Bounds& bounds, const PsoParams& params,
                   Rng& rng, const PsoOptions& options = {});

}  // namespace ares
