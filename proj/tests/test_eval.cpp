#include <doctest.h>

#include <cmath>

#include "ares/eval.hpp"

using namespace ares;
using doctest::Approx;

TEST_CASE("required_samples") {
  CHECK(required_samples(0.05, 0.01) == 8478);
  CHECK(4 * std::log(200.0) / 0.0025 == Approx(8477.3).epsilon(1e-5));
  CHECK_THROWS_AS(required_samples(0.05, 2.0), InputError);
  CHECK_THROWS_AS(required_samples(0.0, 0.01), InputError);
  CHECK_THROWS_AS(required_samples(1.0, 0.01), InputError);
}

TEST_CASE("approximation error inverts the sample size") {
  const double eps = approximation_error(80000, 0.01);
  CHECK(eps >= 0.016);
  CHECK(eps <= 0.0165);
  for (double e : {0.01, 0.05, 0.1, 0.3})
    for (double d : {0.001, 0.01, 0.2}) CHECK(approximation_error(required_samples(e, d), d) <= e);
  CHECK_THROWS_AS(approximation_error(0, 0.01), InputError);
}

TEST_CASE("required_samples is monotone") {
  const std::vector<double> grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 0.9};
  for (double e1 : grid)
    for (double e2 : grid)
      for (double d1 : grid)
        for (double d2 : grid)
          if (e1 <= e2 && d1 <= d2) CHECK(required_samples(e1, d1) >= required_samples(e2, d2));
}

TEST_CASE("success_indicator") {
  CHECK(success_indicator(9e-4, 1e-3) == 1);
  CHECK(success_indicator(1.4840, 1e-3) == 0);
  CHECK(success_indicator(1e-3, 1e-3) == 1);
}

namespace {

ExperimentRecord record(int z, double cost, double time = 1.0) {
  ExperimentRecord r;
  r.success = z;
  r.cost = cost;
  r.time_s = time;
  r.levels = 3;
  r.actions = 5;
  r.mean_horizon = 1.5;
  return r;
}

}  // namespace

TEST_CASE("summarize") {
  SUBCASE("sample statistics") {
    const auto t = summarize({record(0, 1), record(0, 2), record(0, 3)}, 0.05, 0.01);
    REQUIRE(t.total.cost);
    CHECK(t.total.cost->avg == 2.0);
    REQUIRE(t.total.cost->std);
    CHECK(*t.total.cost->std == 1.0);
    CHECK(t.total.cost->min == 1.0);
    CHECK(t.total.cost->max == 3.0);
    CHECK(t.successful.count == 0);
    CHECK_FALSE(t.successful.cost);
  }

  SUBCASE("single record has no deviation") {
    const auto t = summarize({record(1, 5e-4)}, 0.05, 0.01);
    REQUIRE(t.total.cost);
    CHECK(t.total.cost->min == t.total.cost->max);
    CHECK(t.total.cost->avg == t.total.cost->min);
    CHECK_FALSE(t.total.cost->std);
  }

  SUBCASE("success rate") {
    const auto t = summarize({record(1, 1e-4), record(1, 2e-4), record(0, 0.3), record(1, 5e-4)}, 0.05, 0.01);
    CHECK(t.success_rate == 0.75);
    CHECK(t.successes == 3);
    CHECK(t.successful.count == 3);
    CHECK(t.total.count == 4);
    CHECK(t.required_samples == 8478);
  }

  SUBCASE("empty") {
    const auto t = summarize({}, 0.05, 0.01);
    CHECK(t.total.count == 0);
    CHECK_FALSE(t.total.cost);
    CHECK(t.success_rate == 0.0);
  }
}

TEST_CASE("run_experiments") {
  EvalParams params;
  params.birds = 3;
  params.seed = 11;
  params.ares.max_levels = 30;

  SUBCASE("zero samples") {
    params.samples = 0;
    CHECK(run_experiments(params).empty());
  }

  SUBCASE("worker count does not change the records") {
    params.samples = 4;
    const auto a = run_experiments(params);
    params.workers = 4;
    const auto b = run_experiments(params);
    REQUIRE(a.size() == 4);
    REQUIRE(b.size() == 4);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].index == static_cast<std::int64_t>(k));
      CHECK(a[k].seed == experiment_seed(11, k));
      CHECK(a[k].seed == b[k].seed);
      CHECK(a[k].success == b[k].success);
      CHECK(a[k].cost == b[k].cost);
      CHECK(a[k].levels == b[k].levels);
      CHECK(a[k].actions == b[k].actions);
      CHECK(a[k].mean_horizon == b[k].mean_horizon);
      CHECK(a[k].success == success_indicator(a[k].cost, params.ares.phi));
    }
    const auto lone = run_experiment(params, 2);
    CHECK(lone.cost == a[2].cost);
    CHECK(lone.levels == a[2].levels);

    const auto t = summarize(a, params.epsilon, params.delta);
    if (t.successful.cost) CHECK(t.successful.cost->avg <= params.ares.phi);
  }

  SUBCASE("invalid parameters") {
    params.samples = -1;
    CHECK_THROWS_AS(run_experiments(params), InputError);
  }
}
