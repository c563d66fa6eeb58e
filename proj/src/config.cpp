#include "ares/config.hpp"

#include <cstdio>
#include <functional>
#include <map>

#include "ares/errors.hpp"
#include "ares/serialize.hpp"

namespace ares {

namespace {

using Setter = std::function<void(RunConfig&, const json&)>;

template <class T>
T typed(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw InputError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw InputError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw InputError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw InputError("config key '" + key + "' has the wrong type");
  }
}

#define ARES_KEY(name, type, field) \
  {name, [](RunConfig& c, const json& v) { c.field = typed<type>(v, name); }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      ARES_KEY("flock.v_max", double, eval.flock.v_max),
      ARES_KEY("flock.rho", double, eval.flock.rho),
      ARES_KEY("flock.d_min", double, eval.flock.d_min),
      ARES_KEY("flock.theta", double, eval.flock.theta),
      ARES_KEY("flock.upwash_offset", double, eval.flock.upwash_offset),
      ARES_KEY("flock.upwash_lateral_width", double, eval.flock.upwash_lateral_width),
      ARES_KEY("flock.upwash_longitudinal_width", double, eval.flock.upwash_longitudinal_width),
      ARES_KEY("flock.downwash_weight", double, eval.flock.downwash_weight),
      ARES_KEY("ares.phi", double, eval.ares.phi),
      ARES_KEY("ares.m", int, eval.ares.max_levels),
      ARES_KEY("ares.n", int, eval.ares.clones),
      ARES_KEY("ares.h_max", int, eval.ares.max_horizon),
      ARES_KEY("ares.p_start", int, eval.ares.particles_start),
      ARES_KEY("ares.p_inc", int, eval.ares.particles_increment),
      ARES_KEY("ares.p_max", int, eval.ares.particles_max),
      ARES_KEY("pso.max_iterations", int, eval.pso.max_iterations),
      ARES_KEY("pso.stall_iterations", int, eval.pso.stall_iterations),
      ARES_KEY("pso.inertia_min", double, eval.pso.inertia_min),
      ARES_KEY("pso.inertia_max", double, eval.pso.inertia_max),
      ARES_KEY("pso.inertia_decay", double, eval.pso.inertia_decay),
      ARES_KEY("pso.self_adjustment", double, eval.pso.self_adjustment),
      ARES_KEY("pso.social_adjustment", double, eval.pso.social_adjustment),
      ARES_KEY("pso.min_neighbors_fraction", double, eval.pso.min_neighbors_fraction),
      ARES_KEY("eval.epsilon", double, eval.epsilon),
      ARES_KEY("eval.delta", double, eval.delta),
      ARES_KEY("eval.birds", int, eval.birds),
      ARES_KEY("eval.budget_seconds", double, eval.budget_seconds),
      ARES_KEY("eval.workers", int, eval.workers),
      ARES_KEY("seed", std::uint64_t, eval.seed),
      ARES_KEY("output.plan", std::string, output.plan),
      ARES_KEY("output.levels", std::string, output.levels),
      ARES_KEY("output.records", std::string, output.records),
      ARES_KEY("output.summary", std::string, output.summary),
      {"eval.samples",
       [](RunConfig& c, const json& v) {
         if (v.is_null()) c.eval.samples.reset();
         else c.eval.samples = typed<std::int64_t>(v, "eval.samples");
       }},
      // Rescales the upwash field with the wingspan; explicit upwash keys
      // are applied afterwards and win.
      {"flock.wingspan",
       [](RunConfig& c, const json& v) {
         const double w = typed<double>(v, "flock.wingspan");
         const FlockParams scaled = FlockParams::with_wingspan(w);
         c.eval.flock.wingspan = w;
         c.eval.flock.upwash_offset = scaled.upwash_offset;
         c.eval.flock.upwash_lateral_width = scaled.upwash_lateral_width;
         c.eval.flock.upwash_longitudinal_width = scaled.upwash_longitudinal_width;
       }},
  };
  return table;
}

#undef ARES_KEY

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_config(RunConfig& config, const json& flat) {
  if (!flat.is_object()) throw InputError("config must be a JSON object of dotted keys");
  for (const auto& [key, _] : flat.items())
    if (!setters().count(key)) throw InputError("unknown config key '" + key + "'");
  if (flat.contains("flock.wingspan")) setters().at("flock.wingspan")(config, flat.at("flock.wingspan"));
  for (const auto& [key, value] : flat.items())
    if (key != "flock.wingspan") setters().at(key)(config, value);
}

RunConfig load_config(const std::string& path) {
  RunConfig config;
  apply_config(config, read_json_file(path));
  return config;
}

std::string params_digest(const FlockParams& f, const AresParams& a, const PsoParams& p) {
  std::string canon;
  auto add = [&](const char* name, double v) {
    canon += name;
    canon += '=';
    canon += format_double(v);
    canon += ';';
  };
  add("v_max", f.v_max);
  add("rho", f.rho);
  add("d_min", f.d_min);
  add("theta", f.theta);
  add("wingspan", f.wingspan);
  add("upwash_offset", f.upwash_offset);
  add("upwash_lateral_width", f.upwash_lateral_width);
  add("upwash_longitudinal_width", f.upwash_longitudinal_width);
  add("downwash_weight", f.downwash_weight);
  add("phi", a.phi);
  add("m", a.max_levels);
  add("n", a.clones);
  add("h_max", a.max_horizon);
  add("p_start", a.particles_start);
  add("p_inc", a.particles_increment);
  add("p_max", a.particles_max);
  add("max_iterations", p.max_iterations);
  add("stall_iterations", p.stall_iterations);
  add("inertia_min", p.inertia_min);
  add("inertia_max", p.inertia_max);
  add("inertia_decay", p.inertia_decay);
  add("self_adjustment", p.self_adjustment);
  add("social_adjustment", p.social_adjustment);
  add("min_neighbors_fraction", p.min_neighbors_fraction);
  add("improvement_tolerance", p.improvement_tolerance);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ares
