#include "ares/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ares/errors.hpp"
#include "ares/flock_mdp.hpp"
#include "ares/parallel.hpp"

namespace ares {

namespace {

void check_epsilon_delta(double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1)) throw InputError("epsilon must lie in (0, 1)");
  if (!(delta > 0 && delta < 1)) throw InputError("delta must lie in (0, 1)");
}

}  // namespace

std::int64_t required_samples(double epsilon, double delta) {
  check_epsilon_delta(epsilon, delta);
  return static_cast<std::int64_t>(std::ceil(4.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
}

double approximation_error(std::int64_t samples, double delta) {
  if (samples < 1) throw InputError("approximation_error: need at least one sample");
  if (!(delta > 0 && delta < 1)) throw InputError("delta must lie in (0, 1)");
  return std::sqrt(4.0 * std::log(2.0 / delta) / static_cast<double>(samples));
}

void EvalParams::validate() const {
  check_epsilon_delta(epsilon, delta);
  if (samples && *samples < 0) throw InputError("eval: sample count must be nonnegative");
  if (birds < 1) throw InputError("eval: need at least one bird");
  if (workers < 1) throw InputError("eval: need at least one worker");
  ares.validate();
  pso.validate();
  flock.validate();
}

int success_indicator(double final_cost, double phi) { return final_cost <= phi ? 1 : 0; }

ExperimentRecord run_experiment(const EvalParams& params, std::int64_t index) {
  using Clock = std::chrono::steady_clock;
  const std::uint64_t seed = experiment_seed(params.seed, static_cast<std::uint64_t>(index));
  Rng rng(seed);
  const FlockConfig initial = random_initial(rng, params.birds, params.flock, params.spawn);
  const FlockMdp mdp(params.birds, params.flock);

  AresOptions options;
  options.pso = params.pso;
  if (params.budget_seconds > 0)
    options.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(params.budget_seconds));
  const auto start = Clock::now();
  const auto outcome = ares_plan(mdp, initial, params.ares, seed, options);
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

  ExperimentRecord r;
  r.index = index;
  r.seed = seed;
  r.success = success_indicator(outcome.final_cost, params.ares.phi);
  r.cost = outcome.final_cost;
  r.time_s = elapsed;
  r.levels = static_cast<int>(outcome.levels.size());
  r.actions = static_cast<std::int64_t>(outcome.total_actions());
  r.mean_horizon = outcome.mean_horizon;
  r.budget_exhausted = outcome.budget_exhausted;
  return r;
}

std::vector<ExperimentRecord> run_experiments(const EvalParams& params) {
  params.validate();
  const std::int64_t n = params.sample_count();
  std::vector<ExperimentRecord> records(static_cast<std::size_t>(n));
  parallel_for(records.size(), params.workers, [&](std::size_t i) {
    records[i] = run_experiment(params, static_cast<std::int64_t>(i));
  });
  return records;
}

std::optional<Stat> describe(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  Stat s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0;
  for (double v : values) sum += v;
  s.avg = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - s.avg) * (v - s.avg);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

CohortStats cohort(const std::vector<const ExperimentRecord*>& members) {
  CohortStats c;
  c.count = static_cast<std::int64_t>(members.size());
  std::vector<double> cost, time, levels, actions, horizon;
  for (const auto* r : members) {
    cost.push_back(r->cost);
    time.push_back(r->time_s);
    levels.push_back(r->levels);
    actions.push_back(static_cast<double>(r->actions));
    horizon.push_back(r->mean_horizon);
  }
  c.cost = describe(cost);
  c.time_s = describe(time);
  c.levels = describe(levels);
  c.actions = describe(actions);
  c.mean_horizon = describe(horizon);
  return c;
}

}  // namespace

SummaryTable summarize(const std::vector<ExperimentRecord>& records, double epsilon, double delta) {
  SummaryTable t;
  t.epsilon = epsilon;
  t.delta = delta;
  t.required_samples = required_samples(epsilon, delta);
  std::vector<const ExperimentRecord*> all, ok;
  for (const auto& r : records) {
    all.push_back(&r);
    if (r.success) ok.push_back(&r);
    if (r.budget_exhausted) ++t.budget_exhausted;
    if (r.success) t.plan_states += r.levels;
  }
  t.total = cohort(all);
  t.successful = cohort(ok);
  t.successes = static_cast<std::int64_t>(ok.size());
  t.success_rate = all.empty() ? 0.0 : static_cast<double>(ok.size()) / static_cast<double>(all.size());
  return t;
}

}  // namespace ares
