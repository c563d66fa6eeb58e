#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "ares/flock.hpp"
#include "oracles.hpp"

using namespace ares;
using doctest::Approx;

namespace {

FlockConfig one_bird(Eigen::Vector2d x, Eigen::Vector2d v) { return FlockConfig(x, v); }

FlockConfig flock(std::initializer_list<std::array<double, 4>> birds) {
  Points2<double> x(2, static_cast<Eigen::Index>(birds.size())), v(2, x.cols());
  Eigen::Index i = 0;
  for (const auto& b : birds) {
    x.col(i) << b[0], b[1];
    v.col(i) << b[2], b[3];
    ++i;
  }
  return FlockConfig(x, v);
}

FlockConfig random_flock(Rng& rng, Eigen::Index birds, double speed_lo = 0.25, double speed_hi = 0.75) {
  Points2<double> x(2, birds), v(2, birds);
  for (Eigen::Index i = 0; i < birds; ++i) {
    x.col(i) << rng.uniform(0, 3), rng.uniform(0, 3);
    const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double s = rng.uniform(speed_lo, speed_hi);
    v.col(i) << s * std::cos(a), s * std::sin(a);
  }
  return FlockConfig(x, v);
}

FlockAction random_action(Rng& rng, Eigen::Index birds, double scale) {
  FlockAction a(2, birds);
  for (Eigen::Index i = 0; i < birds; ++i) a.col(i) << rng.uniform(-scale, scale), rng.uniform(-scale, scale);
  return a;
}

}  // namespace

TEST_CASE("flock_step") {
  FlockParams p;

  SUBCASE("zero acceleration drifts") {
    const auto c = flock({{0, 0, 1, 0}, {1, 2, 0.5, 0.25}});
    const auto n = flock_step(c, FlockAction(FlockAction::Zero(2, 2)), p);
    CHECK(n.v == c.v);
    CHECK(n.x == c.x + c.v);
  }

  SUBCASE("hand evaluation") {
    p.v_max = 10;
    const auto n = flock_step(one_bird({0, 0}, {1, 0}), FlockAction(Eigen::Vector2d(0, 0.3)), p);
    CHECK(n.v(0, 0) == 1.0);
    CHECK(n.v(1, 0) == Approx(0.3));
    CHECK(n.x(0, 0) == 1.0);
    CHECK(n.x(1, 0) == Approx(0.3));
  }

  SUBCASE("speed clamp is radial") {
    p.v_max = 1.2;
    const auto n = flock_step(one_bird({0, 0}, {1, 0}), FlockAction(Eigen::Vector2d(0.4, 0)), p);
    CHECK(n.v.col(0).norm() <= 1.2);
    CHECK(n.v(0, 0) == Approx(1.2).epsilon(1e-15));
    CHECK(n.v(1, 0) == 0.0);
    CHECK(n.x == n.v);

    const auto m = flock_step(one_bird({0, 0}, {1, 0}), FlockAction(Eigen::Vector2d(0.4, 0.4)), p);
    CHECK(m.v.col(0).norm() <= 1.2);
    CHECK(m.v.col(0).norm() == Approx(1.2).epsilon(1e-15));
    CHECK(m.v(1, 0) / m.v(0, 0) == Approx(0.4 / 1.4));
  }

  CHECK_THROWS_AS(flock_step(one_bird({0, 0}, {1, 0}), FlockAction(FlockAction::Zero(2, 2)), p), InputError);
}

TEST_CASE("project_action") {
  FlockParams p;
  const auto c = one_bird({0, 0}, {1, 0});
  const auto a = project_action(FlockAction(Eigen::Vector2d(1, 0)), c, p);
  CHECK(a(0, 0) == Approx(0.5).epsilon(1e-15));
  CHECK(a.col(0).norm() <= 0.5);
  CHECK(project_action(FlockAction(Eigen::Vector2d(0.1, 0)), c, p) == FlockAction(Eigen::Vector2d(0.1, 0)));
  CHECK(project_action(FlockAction(Eigen::Vector2d(3, -2)), one_bird({0, 0}, {0, 0}), p) ==
        FlockAction::Zero(2, 1));
}

TEST_CASE("unfold") {
  FlockParams p;
  const auto c = one_bird({0, 0}, {1, 0});
  const auto z = unfold(c, {FlockAction::Zero(2, 1), FlockAction::Zero(2, 1)}, p);
  CHECK(z.x(0, 0) == 2.0);
  CHECK(z.v(0, 0) == 1.0);

  const FlockAction up(Eigen::Vector2d(0, 0.2));
  CHECK(unfold(c, {up}, p) == flock_step(c, up, p));
  const auto u = unfold(c, {up, up}, p);
  CHECK(u.v(1, 0) == Approx(0.4));
  CHECK(u.x(0, 0) == Approx(2.0));
  CHECK(u.x(1, 0) == Approx(0.6));

  CHECK_THROWS_AS(unfold(c, {}, p), InputError);
}

TEST_CASE("clear view") {
  const FlockParams p;
  CHECK(clear_view(one_bird({0, 0}, {1, 0}), p) == 0.0);
  CHECK(clear_view(flock({{0, 0, 1, 0}, {0, 5, 1, 0}}), p) == 0.0);

  for (double d : {0.5, 1.0, 2.0, 4.0}) {
    const auto c = flock({{0, 0, 1, 0}, {d, 0, 1, 0}});
    CHECK(clear_view_of(c, p, 0) == Approx(2 * std::atan(p.wingspan / (2 * d)) / p.theta).epsilon(1e-14));
    CHECK(clear_view_of(c, p, 1) == 0.0);
  }

  CHECK_THROWS_AS(clear_view(flock({{0, 0, 1, 0}, {1, 0, 0, 0}}), p), InputError);
}

TEST_CASE("clear view agrees with ray casting") {
  Rng rng(2024);
  for (double theta : {2 * std::numbers::pi / 3, std::numbers::pi / 3, std::numbers::pi, 1.5 * std::numbers::pi}) {
    FlockParams p;
    p.theta = theta;
    for (int trial = 0; trial < 12; ++trial) {
      const auto c = random_flock(rng, 6);
      const int rays = 20001;
      for (int i = 0; i < c.birds(); ++i) {
        const double tol = 2.0 * (c.birds() - 1) / rays + 1e-12;
        CHECK(std::abs(clear_view_of(c, p, i) - oracle::blocked_by_rays(c, p, i, rays)) <= tol);
      }
    }
  }
}

TEST_CASE("velocity matching") {
  CHECK(velocity_matching(flock({{0, 0, 1, 0}, {2, 2, 1, 0}, {4, 0, 1, 0}})) == 0.0);
  CHECK(velocity_matching(flock({{0, 0, 1, 0}, {1, 1, 0, 1}})) == Approx(std::sqrt(2.0)));
  CHECK(velocity_matching(flock({{0, 0, 1, 0}, {1, 0, 1, 0}, {2, 0, 0, 0}})) == Approx(2.0));

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_flock(rng, 5);
    CHECK(static_cast<long double>(velocity_matching(c)) ==
          Approx(static_cast<double>(oracle::velocity_matching(c))).epsilon(1e-13));
  }
}

TEST_CASE("velocity matching vanishes exactly for equal velocities") {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = random_flock(rng, 2 + static_cast<Eigen::Index>(rng.below(6)));
    const Eigen::Vector2d v = c.v.col(0);
    c.v.colwise() = v;
    CHECK(velocity_matching(c) == 0.0);
    const auto k = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(c.birds())));
    c.v(1, k) = std::nextafter(c.v(1, k), 10.0);
    CHECK(velocity_matching(c) > 0.0);
  }
}

TEST_CASE("upwash") {
  const FlockParams p;
  CHECK(upwash_benefit(one_bird({0, 0}, {1, 0}), p) == 1.0);

  SUBCASE("directly behind is downwash") {
    const auto c = flock({{0, 0, 1, 0}, {-1, 0, 1, 0}});
    CHECK(upwash_field(c, p, 1, 0) <= 0.0);
    CHECK(upwash_of(c, p, 1) == 0.0);
    CHECK(upwash_benefit(c, p) == 2.0);
  }

  SUBCASE("one longitudinal width behind at the lateral peak") {
    const auto c = flock({{0, 0, 1, 0}, {-p.upwash_longitudinal_width, p.upwash_offset, 1, 0}});
    const double peak = 1 - p.downwash_weight * std::exp(-p.upwash_offset * p.upwash_offset /
                                                       (2 * p.upwash_lateral_width * p.upwash_lateral_width));
    CHECK(upwash_field(c, p, 1, 0) == Approx(std::exp(-0.5) * peak).epsilon(1e-14));
    CHECK(upwash_field(c, p, 0, 1) == 0.0);
  }

  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_flock(rng, 6);
    const double ub = upwash_benefit(c, p);
    CHECK(ub == Approx(static_cast<double>(oracle::upwash_metric(c, p))).epsilon(1e-12));
    CHECK(ub >= 0.0);
    CHECK(ub <= 6.0);
  }
}

TEST_CASE("fitness") {
  const FlockParams p;
  CHECK(fitness(one_bird({0, 0}, {1, 0}), p) == 0.0);
  CHECK(fitness(flock({{0, 0, 1, 0}, {0, 10, 1, 0}}), p) == Approx(1.0).epsilon(1e-15));

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_flock(rng, 7);
    const auto m = metrics(c, p);
    CHECK(m.clear_view >= 0.0);
    CHECK(m.clear_view <= 7.0);
    CHECK(m.velocity_matching >= 0.0);
    CHECK(m.fitness >= 0.0);
    CHECK(m.fitness == fitness(c, p));
  }
}

TEST_CASE("extended precision agrees with double") {
  const FlockParams p;
  const BasicFlockParams<long double> pl;
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_flock(rng, 7);
    const BasicFlockConfig<long double> cl(c.x.cast<long double>(), c.v.cast<long double>());
    const auto md = metrics(c, p);
    const auto ml = metrics(cl, pl);
    CHECK(std::abs(md.clear_view - static_cast<double>(ml.clear_view)) < 1e-9);
    CHECK(std::abs(md.velocity_matching - static_cast<double>(ml.velocity_matching)) < 1e-9);
    CHECK(std::abs(md.upwash_benefit - static_cast<double>(ml.upwash_benefit)) < 1e-9);
    CHECK(std::abs(md.fitness - static_cast<double>(ml.fitness)) < 1e-8 * (1 + md.fitness));
  }
}

TEST_CASE("metrics are invariant under rigid motions") {
  const FlockParams p;
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = random_flock(rng, 7);
    const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Eigen::Matrix2d r = Eigen::Rotation2Dd(a).toRotationMatrix();
    const Eigen::Vector2d t(rng.uniform(-50, 50), rng.uniform(-50, 50));
    const FlockConfig moved((r * c.x).colwise() + t, r * c.v);
    CHECK(std::abs(clear_view(moved, p) - clear_view(c, p)) < 1e-9);
    CHECK(std::abs(upwash_benefit(moved, p) - upwash_benefit(c, p)) < 1e-9);
    CHECK(std::abs(velocity_matching(moved) - velocity_matching(c)) < 1e-9);
  }
}

TEST_CASE("dynamics keep speeds capped and projection idempotent") {
  const FlockParams p;
  Rng rng(34);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = random_flock(rng, 4, 0.1, p.v_max);
    for (int t = 0; t < 10; ++t) {
      const FlockAction raw = random_action(rng, 4, 3.0);
      const FlockAction a = project_action(raw, c, p);
      CHECK(project_action(a, c, p) == a);
      for (Eigen::Index i = 0; i < 4; ++i) CHECK(a.col(i).norm() <= p.rho * c.v.col(i).norm());
      c = flock_step(c, a, p);
      for (Eigen::Index i = 0; i < 4; ++i) CHECK(c.v.col(i).norm() <= p.v_max);
    }
  }
}

TEST_CASE("unfold is a left fold of flock_step") {
  const FlockParams p;
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_flock(rng, 3);
    std::vector<FlockAction> seq;
    for (int t = 0; t < 5; ++t) seq.push_back(random_action(rng, 3, 2.0));
    FlockConfig s = c;
    for (const auto& a : seq) s = flock_step(s, a, p);
    CHECK(unfold(c, seq, p) == s);
  }
}

TEST_CASE("random_initial") {
  const FlockParams p;

  SUBCASE("single bird") {
    Rng rng(1);
    const auto c = random_initial(rng, 1, p);
    CHECK(c.birds() == 1);
    CHECK(c.x.minCoeff() >= 0.0);
    CHECK(c.x.maxCoeff() <= 3.0);
  }

  SUBCASE("seven birds satisfy every spawn constraint") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const auto c = random_initial(rng, 7, p);
      CHECK(c.x.minCoeff() >= 0.0);
      CHECK(c.x.maxCoeff() <= 3.0);
      CHECK(c.v.minCoeff() >= 0.25);
      CHECK(c.v.maxCoeff() <= 0.75);
      int without = 0;
      for (Eigen::Index i = 0; i < 7; ++i) {
        for (Eigen::Index j = i + 1; j < 7; ++j) CHECK((c.x.col(i) - c.x.col(j)).norm() > p.d_min);
        if (!(upwash_of(c, p, i) > 1e-3)) ++without;
      }
      CHECK(without <= 1);
    }
  }

  SUBCASE("deterministic") {
    Rng a(77), b(77);
    CHECK(random_initial(a, 5, p) == random_initial(b, 5, p));
  }

  SUBCASE("impossible region") {
    Rng rng(1);
    SpawnRegion cramped;
    cramped.position_hi = 0.2;
    cramped.max_attempts = 500;
    try {
      random_initial(rng, 3, p, cramped);
      FAIL("expected a generation error");
    } catch (const GenerationError& e) {
      CHECK(std::string(e.what()).find("d_min") != std::string::npos);
    }
  }
}

TEST_CASE("perfect_v") {
  const FlockParams p;
  const VShape v = default_v_shape(p);
  CHECK(fitness(perfect_v(1, p, v.wedge_angle, v.spacing), p) == 0.0);
  for (int b : {3, 5, 7}) {
    const auto c = perfect_v(b, p, v.wedge_angle, v.spacing);
    CHECK(c.birds() == b);
    CHECK(clear_view(c, p) == 0.0);
    CHECK(velocity_matching(c) == 0.0);
    CHECK(fitness(c, p) <= 1e-3);
  }
  CHECK_THROWS_AS(perfect_v(4, p, v.wedge_angle, v.spacing), InputError);
  CHECK_THROWS_AS(perfect_v(3, p, 0.2, v.spacing), InputError);
}
