#include "ares/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ares/errors.hpp"
#include "ares/parallel.hpp"

namespace ares {

void PsoParams::validate() const {
  if (particles < 2) throw InputError("pso: need at least two particles");
  if (!(self_adjustment >= 0) || !(social_adjustment >= 0))
    throw InputError("pso: adjustment weights must be nonnegative");
  if (!(inertia_min > 0) || !(inertia_min <= inertia_max))
    throw InputError("pso: inertia range must satisfy 0 < min <= max");
  if (!(inertia_decay > 0 && inertia_decay <= 1)) throw InputError("pso: inertia decay must lie in (0, 1]");
  if (max_iterations < 1) throw InputError("pso: max_iterations must be at least 1");
  if (stall_iterations < 1) throw InputError("pso: stall_iterations must be at least 1");
  if (!(min_neighbors_fraction >= 0 && min_neighbors_fraction <= 1))
    throw InputError("pso: neighbourhood fraction must lie in [0, 1]");
}

void Bounds::validate() const {
  if (lower.size() < 1 || lower.size() != upper.size())
    throw InputError("pso: bounds must be non-empty and of equal length");
  for (Eigen::Index d = 0; d < lower.size(); ++d)
    if (!std::isfinite(lower(d)) || !std::isfinite(upper(d)) || !(lower(d) < upper(d)))
      throw InputError("pso: bound " + std::to_string(d) + " needs finite lo < hi");
}

namespace {

std::vector<int> random_neighborhood(Rng& rng, int p, double fraction) {
  const int k_min = std::min(p, std::max(2, static_cast<int>(std::ceil(fraction * p))));
  const int k = k_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - k_min + 1)));
  std::vector<int> pool(static_cast<std::size_t>(p));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

Eigen::VectorXd uniform_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd u(n);
  for (Eigen::Index d = 0; d < n; ++d) u(d) = rng.uniform();
  return u;
}

double checked(const Objective& f, const Eigen::VectorXd& x) {
  const double c = f(x);
  if (!std::isfinite(c)) {
    std::ostringstream msg;
    msg << "pso: objective returned " << c << " at position [" << x.transpose() << "]";
    throw OptimizationError(msg.str(), x);
  }
  return c;
}

}  // namespace

Swarm init_swarm(Rng& rng, const Bounds& bounds, const PsoParams& params) {
  bounds.validate();
  params.validate();
  const Eigen::Index dim = bounds.dim();
  Swarm swarm{{}, bounds, params.inertia_max};
  swarm.particles.reserve(static_cast<std::size_t>(params.particles));
  for (int j = 0; j < params.particles; ++j) {
    Particle p;
    p.position.resize(dim);
    p.velocity.resize(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      const double width = bounds.upper(d) - bounds.lower(d);
      p.position(d) = rng.uniform(bounds.lower(d), bounds.upper(d));
      p.velocity(d) = rng.uniform(-width, width);
    }
    p.best_position = p.position;
    p.best_cost = std::numeric_limits<double>::infinity();
    swarm.particles.push_back(std::move(p));
  }
  for (auto& p : swarm.particles)
    p.neighbors = random_neighborhood(rng, params.particles, params.min_neighbors_fraction);
  return swarm;
}

Particle update_particle(const Particle& particle, const Eigen::VectorXd& neighborhood_best,
                         const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, double inertia,
                         const PsoParams& params, const Bounds& bounds) {
  Particle next = particle;
  next.velocity = inertia * particle.velocity +
                  params.self_adjustment * u1.cwiseProduct(particle.best_position - particle.position) +
                  params.social_adjustment * u2.cwiseProduct(neighborhood_best - particle.position);
  next.position = particle.position + next.velocity;
  for (Eigen::Index d = 0; d < next.position.size(); ++d) {
    if (next.position(d) < bounds.lower(d)) {
      next.position(d) = bounds.lower(d);
      next.velocity(d) = 0;
    } else if (next.position(d) > bounds.upper(d)) {
      next.position(d) = bounds.upper(d);
      next.velocity(d) = 0;
    }
  }
  return next;
}

PsoResult optimize(const Objective& objective, const Bounds& bounds, const PsoParams& params,
                   Rng& rng, const PsoOptions& options) {
  Swarm swarm = init_swarm(rng, bounds, params);
  auto& ps = swarm.particles;
  const std::size_t n = ps.size();
  const Eigen::Index dim = bounds.dim();

  std::vector<double> costs(n);
  auto evaluate = [&] {
    parallel_for(n, options.workers, [&](std::size_t j) { costs[j] = checked(objective, ps[j].position); });
  };

  evaluate();
  std::size_t best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    ps[j].best_cost = costs[j];
    if (costs[j] < costs[best]) best = j;
  }
  PsoResult result{ps[best].best_position, ps[best].best_cost, 0, {}};
  result.trace.push_back(result.cost);

  int stalled = 0;
  std::vector<Eigen::VectorXd> social(n);
  for (int it = 1; it <= params.max_iterations; ++it) {
    // Neighbourhood bests are taken from the personal bests at the start of
    // the sweep; random factors are drawn in particle order.
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t g = j;
      for (int k : ps[j].neighbors) {
        const auto ku = static_cast<std::size_t>(k);
        if (ps[ku].best_cost < ps[g].best_cost) g = ku;
      }
      social[j] = ps[g].best_position;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::VectorXd u1 = uniform_vector(rng, dim);
      const Eigen::VectorXd u2 = uniform_vector(rng, dim);
      ps[j] = update_particle(ps[j], social[j], u1, u2, swarm.inertia, params, bounds);
    }
    evaluate();
    for (std::size_t j = 0; j < n; ++j) {
      if (costs[j] < ps[j].best_cost) {
        ps[j].best_cost = costs[j];
        ps[j].best_position = ps[j].position;
      }
    }
    const double previous = result.cost;
    for (std::size_t j = 0; j < n; ++j) {
      if (ps[j].best_cost < result.cost) {
        result.cost = ps[j].best_cost;
        result.position = ps[j].best_position;
      }
    }
    result.iterations = it;
    result.trace.push_back(result.cost);
    if (previous - result.cost > params.improvement_tolerance) {
      stalled = 0;
    } else {
      ++stalled;
      swarm.inertia = std::max(params.inertia_min, swarm.inertia * params.inertia_decay);
      if (stalled >= params.stall_iterations) break;
    }
  }
  return result;
}

}  // namespace ares
