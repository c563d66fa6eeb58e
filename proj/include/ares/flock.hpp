#pragma once

// V-formation flock model: dynamics, formation metrics, fitness, and
// generators for random and reference configurations. Everything here is a
// pure function templated on the scalar type.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ares/errors.hpp"
#include "ares/rng.hpp"

namespace ares {

template <class Scalar>
using Points2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Positions and velocities of a flock, one column per bird.
template <class Scalar>
struct BasicFlockConfig {
  Points2<Scalar> x;
  Points2<Scalar> v;

  BasicFlockConfig() = default;
  BasicFlockConfig(Points2<Scalar> positions, Points2<Scalar> velocities)
      : x(std::move(positions)), v(std::move(velocities)) {
    if (x.cols() != v.cols()) throw InputError("FlockConfig: position/velocity bird counts differ");
    if (x.cols() < 1) throw InputError("FlockConfig: a flock needs at least one bird");
    if (!x.allFinite() || !v.allFinite()) throw InputError("FlockConfig: non-finite coordinate");
  }

  Eigen::Index birds() const { return x.cols(); }

  friend bool operator==(const BasicFlockConfig& a, const BasicFlockConfig& b) {
    return a.x.cols() == b.x.cols() && a.x == b.x && a.v == b.v;
  }
};

/// Per-bird accelerations, one column per bird.
template <class Scalar>
using BasicFlockAction = Points2<Scalar>;

template <class Scalar>
struct BasicFlockParams {
  Scalar v_max = 2;
  Scalar rho = 0.5;           // |a_i| <= rho |v_i|
  Scalar d_min = 0.3;         // spawn separation
  Scalar theta = 2 * std::numbers::pi_v<Scalar> / 3;  // full view-cone angle
  Scalar wingspan = 1;
  // Upwash field, in length units. Defaults scale with the wingspan.
  Scalar upwash_offset = 1;             // lateral position of the peak
  Scalar upwash_lateral_width = 0.25;
  Scalar upwash_longitudinal_width = 1;
  Scalar downwash_weight = 1;

  static BasicFlockParams with_wingspan(Scalar w) {
    BasicFlockParams p;
    p.wingspan = w;
    p.upwash_offset = w;
    p.upwash_lateral_width = w / 4;
    p.upwash_longitudinal_width = w;
    return p;
  }

  void validate() const {
    auto positive = [](Scalar s) { return std::isfinite(static_cast<double>(s)) && s > 0; };
    if (!positive(v_max)) throw InputError("flock.v_max must be positive");
    if (!(rho > 0 && rho < 1)) throw InputError("flock.rho must lie in (0, 1)");
    if (!positive(d_min)) throw InputError("flock.d_min must be positive");
    if (!(theta > 0 && theta < 2 * std::numbers::pi_v<Scalar>))
      throw InputError("flock.theta must lie in (0, 2*pi)");
    if (!positive(wingspan)) throw InputError("flock.wingspan must be positive");
    if (!positive(upwash_offset) || !positive(upwash_lateral_width) ||
        !positive(upwash_longitudinal_width) || !positive(downwash_weight))
      throw InputError("flock upwash parameters must be positive");
  }
};

using FlockConfig = BasicFlockConfig<double>;
using FlockAction = BasicFlockAction<double>;
using FlockParams = BasicFlockParams<double>;

namespace detail {

// Scales `u` radially so that |u| <= limit holds exactly in floating point.
template <class Derived>
void cap_norm(Eigen::MatrixBase<Derived>&& u, typename Derived::Scalar limit) {
  using Scalar = typename Derived::Scalar;
  const Scalar n = u.norm();
  if (!(n > limit)) return;
  if (!(limit > 0)) {
    u.setZero();
    return;
  }
  const Vec2<Scalar> raw = u;
  Scalar f = limit / n;
  Vec2<Scalar> r = raw * f;
  while (r.norm() > limit) {
    f = std::nextafter(f, Scalar(0));
    r = raw * f;
  }
  u = r;
}

template <class Scalar>
Vec2<Scalar> perp(const Vec2<Scalar>& u) {
  return {-u.y(), u.x()};
}

template <class Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <class Scalar>
void require_headings(const BasicFlockConfig<Scalar>& c, const char* who) {
  for (Eigen::Index i = 0; i < c.birds(); ++i)
    if (c.v.col(i).squaredNorm() == 0)
      throw InputError(std::string(who) + ": bird " + std::to_string(i) +
                       " has zero velocity, heading undefined");
}

}  // namespace detail

/// Checks the speed cap on top of the shape checks done at construction.
template <class Scalar>
void validate(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params) {
  for (Eigen::Index i = 0; i < c.birds(); ++i)
    if (c.v.col(i).norm() > params.v_max)
      throw InputError("FlockConfig: bird " + std::to_string(i) + " exceeds v_max");
}

/// Radially rescales every acceleration above rho*|v_i| onto that bound.
template <class Scalar>
BasicFlockAction<Scalar> project_action(const BasicFlockAction<Scalar>& raw,
                                        const BasicFlockConfig<Scalar>& c,
                                        const BasicFlockParams<Scalar>& params) {
  if (raw.cols() != c.birds()) throw InputError("project_action: bird count mismatch");
  BasicFlockAction<Scalar> a = raw;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    detail::cap_norm(a.col(i), params.rho * c.v.col(i).norm());
  return a;
}

/// One step of the flock dynamics. Velocity updates first and is clamped to
/// v_max; the position then advances by the new velocity.
template <class Scalar>
BasicFlockConfig<Scalar> flock_step(const BasicFlockConfig<Scalar>& c,
                                    const BasicFlockAction<Scalar>& a,
                                    const BasicFlockParams<Scalar>& params) {
  if (a.cols() != c.birds()) throw InputError("flock_step: bird count mismatch");
  BasicFlockConfig<Scalar> next;
  next.v = c.v + a;
  for (Eigen::Index i = 0; i < next.v.cols(); ++i) detail::cap_norm(next.v.col(i), params.v_max);
  next.x = c.x + next.v;
  return next;
}

/// Configuration reached after applying `seq` in order.
template <class Scalar>
BasicFlockConfig<Scalar> unfold(const BasicFlockConfig<Scalar>& c,
                                const std::vector<BasicFlockAction<Scalar>>& seq,
                                const BasicFlockParams<Scalar>& params) {
  if (seq.empty()) throw InputError("unfold: empty action sequence");
  BasicFlockConfig<Scalar> s = c;
  for (const auto& a : seq) s = flock_step(s, a, params);
  return s;
}

namespace detail {

// Blocked fraction of bird i's cone given unit headings of all birds.
template <class Scalar>
Scalar blocked_fraction(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params,
                        const Points2<Scalar>& heading, Eigen::Index i,
                        std::vector<std::pair<Scalar, Scalar>>& spans) {
  using std::atan2;
  using std::cos;
  using std::sin;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar half = params.theta / 2;
  const Scalar ch = cos(half), sh = sin(half);
  const bool convex_cone = half < pi / 2;
  const Vec2<Scalar> xi = c.x.col(i);
  const Vec2<Scalar> u = heading.col(i);

  spans.clear();
  for (Eigen::Index j = 0; j < c.birds(); ++j) {
    if (j == i) continue;
    const Vec2<Scalar> half_wing = perp<Scalar>(heading.col(j)) * (params.wingspan / 2);
    const Vec2<Scalar> p1 = c.x.col(j) + half_wing - xi;
    const Vec2<Scalar> p2 = c.x.col(j) - half_wing - xi;
    // Local (forward, left) coordinates of both wingtips.
    const Scalar f1 = u.dot(p1), l1 = cross<Scalar>(u, p1);
    const Scalar f2 = u.dot(p2), l2 = cross<Scalar>(u, p2);
    if (convex_cone) {
      // The cone is the intersection of two half-planes through the apex; a
      // segment with both ends strictly outside one of them misses it.
      if (ch * l1 - sh * f1 > 0 && ch * l2 - sh * f2 > 0) continue;
      if (-ch * l1 - sh * f1 > 0 && -ch * l2 - sh * f2 > 0) continue;
    }
    const Scalar a1 = atan2(l1, f1);
    // Signed sweep from p1 to p2, the short way round.
    const Scalar sweep = atan2(cross<Scalar>(p1, p2), p1.dot(p2));
    const Scalar lo = sweep >= 0 ? a1 : a1 + sweep;
    const Scalar hi = lo + std::abs(sweep);
    for (Scalar shift : {Scalar(0), 2 * pi, -2 * pi}) {
      const Scalar s = std::max(lo + shift, -half);
      const Scalar e = std::min(hi + shift, half);
      if (e > s) spans.emplace_back(s, e);
    }
  }
  if (spans.empty()) return 0;
  std::sort(spans.begin(), spans.end());
  Scalar blocked = 0;
  Scalar cur_s = spans.front().first, cur_e = spans.front().second;
  for (std::size_t k = 1; k < spans.size(); ++k) {
    if (spans[k].first > cur_e) {
      blocked += cur_e - cur_s;
      cur_s = spans[k].first;
      cur_e = spans[k].second;
    } else {
      cur_e = std::max(cur_e, spans[k].second);
    }
  }
  blocked += cur_e - cur_s;
  return std::min(blocked / params.theta, Scalar(1));
}

template <class Scalar>
Points2<Scalar> headings(const BasicFlockConfig<Scalar>& c) {
  Points2<Scalar> h(2, c.birds());
  for (Eigen::Index i = 0; i < c.birds(); ++i) h.col(i) = c.v.col(i).normalized();
  return h;
}

}  // namespace detail

/// Blocked fraction of bird i's view cone, in [0, 1]. Every other bird is a
/// wing segment of length `wingspan` perpendicular to its velocity; the
/// blocked measure is the union of their angular extents inside the cone.
template <class Scalar>
Scalar clear_view_of(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params,
                     Eigen::Index i) {
  detail::require_headings(c, "clear_view");
  std::vector<std::pair<Scalar, Scalar>> spans;
  return detail::blocked_fraction(c, params, detail::headings(c), i, spans);
}

/// CV: sum over birds of the blocked fraction of each view cone.
template <class Scalar>
Scalar clear_view(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params) {
  detail::require_headings(c, "clear_view");
  const Points2<Scalar> h = detail::headings(c);
  thread_local std::vector<std::pair<Scalar, Scalar>> spans;
  Scalar total = 0;
  for (Eigen::Index i = 0; i < c.birds(); ++i) total += detail::blocked_fraction(c, params, h, i, spans);
  return total;
}

/// VM: sum of |v_i - v_j| over unordered pairs.
template <class Scalar>
Scalar velocity_matching(const BasicFlockConfig<Scalar>& c) {
  Scalar total = 0;
  for (Eigen::Index i = 0; i < c.birds(); ++i)
    for (Eigen::Index j = i + 1; j < c.birds(); ++j) total += (c.v.col(i) - c.v.col(j)).norm();
  return total;
}

/// Upwash bird i receives from bird j. Positive off j's wingtips behind it,
/// negative (downwash) directly behind, zero ahead of j.
template <class Scalar>
Scalar upwash_field(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params,
                    Eigen::Index i, Eigen::Index j) {
  using std::exp;
  const Vec2<Scalar> ahead = c.v.col(j).normalized();
  const Vec2<Scalar> d = c.x.col(i) - c.x.col(j);
  const Scalar trail = -d.dot(ahead);
  if (trail < 0) return 0;
  const Scalar lateral = std::abs(detail::cross<Scalar>(ahead, d));
  const Scalar sl = params.upwash_longitudinal_width;
  const Scalar sw = params.upwash_lateral_width;
  const Scalar off = lateral - params.upwash_offset;
  const Scalar longitudinal = exp(-trail * trail / (2 * sl * sl));
  return longitudinal * (exp(-off * off / (2 * sw * sw)) -
                         params.downwash_weight * exp(-lateral * lateral / (2 * sw * sw)));
}

/// Clamped upwash benefit of bird i, in [0, 1].
template <class Scalar>
Scalar upwash_of(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params,
                 Eigen::Index i) {
  Scalar total = 0;
  for (Eigen::Index j = 0; j < c.birds(); ++j)
    if (j != i) total += upwash_field(c, params, i, j);
  return std::clamp(total, Scalar(0), Scalar(1));
}

/// UB metric: sum over birds of (1 - ub_i); 1 in a perfect V (the leader).
template <class Scalar>
Scalar upwash_benefit(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params) {
  detail::require_headings(c, "upwash_benefit");
  Scalar total = 0;
  for (Eigen::Index i = 0; i < c.birds(); ++i) total += 1 - upwash_of(c, params, i);
  return total;
}

template <class Scalar>
struct FlockMetrics {
  Scalar clear_view;
  Scalar velocity_matching;
  Scalar upwash_benefit;
  Scalar fitness;
};

template <class Scalar>
FlockMetrics<Scalar> metrics(const BasicFlockConfig<Scalar>& c,
                             const BasicFlockParams<Scalar>& params) {
  const Scalar cv = clear_view(c, params);
  const Scalar vm = velocity_matching(c);
  const Scalar ub = upwash_benefit(c, params);
  return {cv, vm, ub, cv * cv + vm * vm + (ub - 1) * (ub - 1)};
}

/// J = CV^2 + VM^2 + (UB - 1)^2; zero in a perfect V.
template <class Scalar>
Scalar fitness(const BasicFlockConfig<Scalar>& c, const BasicFlockParams<Scalar>& params) {
  return metrics(c, params).fitness;
}

/// Sampling region for initial flocks.
struct SpawnRegion {
  double position_lo = 0.0;
  double position_hi = 3.0;
  double velocity_lo = 0.25;
  double velocity_hi = 0.75;
  double upwash_threshold = 1e-3;  // "feels" upwash iff ub_i exceeds this
  int max_attempts = 100000;
};

/// Uniform random flock subject to spawn separation and the requirement that
/// all birds but at most one feel some upwash. Rejection sampled.
inline FlockConfig random_initial(Rng& rng, Eigen::Index birds, const FlockParams& params,
                                  const SpawnRegion& region = {}) {
  if (birds < 1) throw InputError("random_initial: need at least one bird");
  params.validate();
  std::int64_t too_close = 0;
  std::int64_t no_upwash = 0;
  Points2<double> x(2, birds), v(2, birds);
  for (int attempt = 0; attempt < region.max_attempts; ++attempt) {
    for (Eigen::Index i = 0; i < birds; ++i) {
      x(0, i) = rng.uniform(region.position_lo, region.position_hi);
      x(1, i) = rng.uniform(region.position_lo, region.position_hi);
      v(0, i) = rng.uniform(region.velocity_lo, region.velocity_hi);
      v(1, i) = rng.uniform(region.velocity_lo, region.velocity_hi);
    }
    bool separated = true;
    for (Eigen::Index i = 0; i < birds && separated; ++i)
      for (Eigen::Index j = i + 1; j < birds; ++j)
        if ((x.col(i) - x.col(j)).norm() <= params.d_min) {
          separated = false;
          break;
        }
    if (!separated) {
      ++too_close;
      continue;
    }
    FlockConfig c(x, v);
    int without = 0;
    for (Eigen::Index i = 0; i < birds; ++i)
      if (!(upwash_of(c, params, i) > region.upwash_threshold)) ++without;
    if (without > 1) {
      ++no_upwash;
      continue;
    }
    return c;
  }
  throw GenerationError("random_initial: " + std::to_string(region.max_attempts) +
                        " attempts exhausted; most often violated: " +
                        (too_close >= no_upwash ? "minimum pairwise distance d_min"
                                                : "all birds but one must feel upwash"));
}

/// Reference V: leader at the origin heading +x, arms alternating left and
/// right. Each trailing bird sits `spacing` to the side of its front
/// neighbour and `spacing / tan(wedge_angle / 2)` behind it, at the same
/// velocity.
inline FlockConfig perfect_v(Eigen::Index birds, const FlockParams& params, double wedge_angle,
                             double spacing, double speed = 1.0) {
  if (!(birds == 1 || (birds >= 3 && birds % 2 == 1)))
    throw InputError("perfect_v: bird count must be 1 or odd and at least 3");
  if (!(wedge_angle > 0 && wedge_angle < std::numbers::pi) || !(spacing > 0) || !(speed > 0) ||
      speed > params.v_max)
    throw InputError("perfect_v: invalid wedge geometry");
  const double behind = spacing / std::tan(wedge_angle / 2);
  Points2<double> x(2, birds), v(2, birds);
  v.row(0).setConstant(speed);
  v.row(1).setZero();
  x.col(0).setZero();
  for (Eigen::Index k = 1; k < birds; ++k) {
    const double rank = static_cast<double>((k + 1) / 2);
    const double side = (k % 2 == 1) ? 1.0 : -1.0;
    x(0, k) = -rank * behind;
    x(1, k) = side * rank * spacing;
  }
  FlockConfig c(x, v);
  if (clear_view(c, params) > 0)
    throw InputError("perfect_v: trailing birds block each other's view; widen the wedge");
  return c;
}

/// Wedge and spacing that put every trailing bird next to its upwash peak.
struct VShape {
  double wedge_angle;
  double spacing;
};

inline VShape default_v_shape(const FlockParams& params) {
  // Trailing distance of 5% of the lateral offset: well inside the cone-free
  // band and near the longitudinal peak of the upwash field.
  return {2 * std::atan(20.0), params.upwash_offset};
}

}  // namespace ares
