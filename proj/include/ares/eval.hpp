#pragma once

// Monte-Carlo evaluation: (epsilon, delta) sample sizing, seeded experiment
// execution over random initial flocks, and cohort statistics.

#include <cstdint>
#include <optional>
#include <vector>

#include "ares/ares.hpp"
#include "ares/flock.hpp"
#include "ares/pso.hpp"

namespace ares {

/// N = ceil(4 ln(2/delta) / epsilon^2) Bernoulli samples give an additive
/// (epsilon, delta) approximation of the success probability.
std::int64_t required_samples(double epsilon, double delta);

/// Absolute error achieved by `samples` Bernoulli samples at confidence
/// 1 - delta; the inverse of required_samples.
double approximation_error(std::int64_t samples, double delta);

struct EvalParams {
  double epsilon = 0.05;
  double delta = 0.01;
  std::optional<std::int64_t> samples;  // overrides the formula when set
  int birds = 7;
  AresParams ares;
  PsoParams pso;
  FlockParams flock;
  SpawnRegion spawn;
  double budget_seconds = 120.0;  // per experiment; <= 0 disables
  int workers = 1;
  std::uint64_t seed = 0;

  void validate() const;
  std::int64_t sample_count() const { return samples ? *samples : required_samples(epsilon, delta); }
};

struct ExperimentRecord {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  int success = 0;  // Z
  double cost = 0.0;
  double time_s = 0.0;
  int levels = 0;
  std::int64_t actions = 0;
  double mean_horizon = 0.0;
  bool budget_exhausted = false;
};

/// Z = 1 iff the final cost is at most phi.
int success_indicator(double final_cost, double phi);

/// Runs one experiment in isolation: the flock is drawn from
/// Rng(experiment_seed(master, index)) and planning uses the same seed.
ExperimentRecord run_experiment(const EvalParams& params, std::int64_t index);

/// Records come back in index order and, apart from wall times, depend only
/// on `params` (not on the worker count).
std::vector<ExperimentRecord> run_experiments(const EvalParams& params);

struct Stat {
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  std::optional<double> std;  // sample std; absent below two values
};

/// Absent when `values` is empty.
std::optional<Stat> describe(const std::vector<double>& values);

struct CohortStats {
  std::int64_t count = 0;
  std::optional<Stat> cost;
  std::optional<Stat> time_s;
  std::optional<Stat> levels;
  std::optional<Stat> actions;
  std::optional<Stat> mean_horizon;
};

struct SummaryTable {
  CohortStats successful;
  CohortStats total;
  std::int64_t successes = 0;
  double success_rate = 0.0;  // also the estimate of the success probability
  double epsilon = 0.0;
  double delta = 0.0;
  std::int64_t required_samples = 0;
  std::int64_t budget_exhausted = 0;
  std::int64_t plan_states = 0;  // committed level states across successful plans
};

SummaryTable summarize(const std::vector<ExperimentRecord>& records, double epsilon, double delta);

}  // namespace ares
