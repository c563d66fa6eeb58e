#include "ares/ares.hpp"

#include <algorithm>
#include <numeric>

namespace ares {

void AresParams::validate() const {
  if (!(phi > 0)) throw InputError("ares: phi must be positive");
  if (max_levels < 1) throw InputError("ares: m must be at least 1");
  if (clones < 1) throw InputError("ares: n must be at least 1");
  if (max_horizon < 1) throw InputError("ares: h_max must be at least 1");
  if (particles_start < 2) throw InputError("ares: p_start must be at least 2");
  if (particles_increment < 1) throw InputError("ares: p_inc must be at least 1");
  if (particles_start > particles_max) throw InputError("ares: p_start must not exceed p_max");
}

double dynamic_threshold(double previous_cost, int max_levels, int level) {
  if (level < 1 || level > max_levels)
    throw InputError("dynamic_threshold: level " + std::to_string(level) + " outside [1, " +
                     std::to_string(max_levels) + "]");
  if (!(previous_cost >= 0)) throw InputError("dynamic_threshold: negative cost");
  return previous_cost / static_cast<double>(max_levels - level + 1);
}

bool next_level_check(double previous_level, double best_cost, double threshold) {
  return best_cost < previous_level - threshold;
}

std::vector<std::size_t> rank_by_cost(const std::vector<double>& costs) {
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  return order;
}

std::vector<std::size_t> resample_sources(const std::vector<double>& costs, Rng& rng) {
  if (costs.empty()) throw InputError("resample: empty clone list");
  const auto order = rank_by_cost(costs);
  const std::size_t keep = (costs.size() + 1) / 2;
  std::vector<std::size_t> sources(costs.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    sources[order[r]] = r < keep ? order[r] : order[rng.below(keep)];
  return sources;
}

}  // namespace ares
