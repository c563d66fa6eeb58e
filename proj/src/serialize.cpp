#include "ares/serialize.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <system_error>

namespace ares {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void to_json(json& j, const FlockConfig& c) {
  json x = json::array(), v = json::array();
  for (Eigen::Index i = 0; i < c.birds(); ++i) {
    x.push_back({c.x(0, i), c.x(1, i)});
    v.push_back({c.v(0, i), c.v(1, i)});
  }
  j = {{"b", c.birds()}, {"x", std::move(x)}, {"v", std::move(v)}};
}

void from_json(const json& j, FlockConfig& c) {
  const auto b = j.at("b").get<Eigen::Index>();
  const auto& xs = j.at("x");
  const auto& vs = j.at("v");
  if (b < 1 || static_cast<Eigen::Index>(xs.size()) != b || static_cast<Eigen::Index>(vs.size()) != b)
    throw InputError("FlockConfig JSON: b does not match the x/v arrays");
  Points2<double> x(2, b), v(2, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto& xi = xs.at(static_cast<std::size_t>(i));
    const auto& vi = vs.at(static_cast<std::size_t>(i));
    if (xi.size() != 2 || vi.size() != 2) throw InputError("FlockConfig JSON: vectors must have two entries");
    x(0, i) = xi.at(0).get<double>();
    x(1, i) = xi.at(1).get<double>();
    v(0, i) = vi.at(0).get<double>();
    v(1, i) = vi.at(1).get<double>();
  }
  c = FlockConfig(std::move(x), std::move(v));
}

PlanHeader plan_header_from_json(const json& j) {
  PlanHeader h;
  h.mdp = j.value("mdp", std::string("flock"));
  h.success = j.value("success", false);
  h.phi = j.value("phi", 0.0);
  h.seed = j.value("seed", std::uint64_t{0});
  h.params_digest = j.value("params_digest", std::string());
  return h;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("failed writing " + path);
}

void write_level_log(std::ostream& os, const std::vector<AttemptRecord>& attempts) {
  os << "level,ell,delta1,h,p,best_cost,wall_ms\n";
  for (const auto& a : attempts)
    os << a.level << ',' << format_double(a.previous) << ',' << format_double(a.threshold) << ','
       << a.horizon << ',' << a.particles << ',' << format_double(a.best_cost) << ','
       << format_double(a.wall_ms) << '\n';
}

void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records, Timing timing) {
  os << "index,seed,Z,cost,time_s,levels,actions,mean_h,budget_exhausted\n";
  for (const auto& r : records) {
    os << r.index << ',' << r.seed << ',' << r.success << ',' << format_double(r.cost) << ',';
    if (timing == Timing::Include) os << format_double(r.time_s);
    os << ',' << r.levels << ',' << r.actions << ',' << format_double(r.mean_horizon) << ','
       << (r.budget_exhausted ? 1 : 0) << '\n';
  }
}

namespace {

json stat_json(const std::optional<Stat>& s) {
  if (!s) return nullptr;
  json j = {{"min", s->min}, {"max", s->max}, {"avg", s->avg}};
  j["std"] = s->std ? json(*s->std) : json(nullptr);
  return j;
}

json cohort_json(const CohortStats& c) {
  return {{"count", c.count},
          {"cost", stat_json(c.cost)},
          {"time_s", stat_json(c.time_s)},
          {"plan_levels", stat_json(c.levels)},
          {"plan_actions", stat_json(c.actions)},
          {"mean_horizon", stat_json(c.mean_horizon)}};
}

}  // namespace

json summary_to_json(const SummaryTable& t, std::int64_t samples_run) {
  json j = {{"successful", cohort_json(t.successful)},
            {"total", cohort_json(t.total)},
            {"successes", t.successes},
            {"success_rate", t.success_rate},
            {"mu_z", t.success_rate},
            {"epsilon", t.epsilon},
            {"delta", t.delta},
            {"required_samples", t.required_samples},
            {"samples_run", samples_run},
            {"budget_exhausted", t.budget_exhausted}};
  if (samples_run > 0) j["achieved_epsilon"] = approximation_error(samples_run, t.delta);
  // Every committed state of a successful plan is itself a solved start
  // state, which gives a much larger (if correlated) sample.
  j["plan_states"] = t.plan_states;
  if (t.plan_states > 0) j["plan_states_epsilon"] = approximation_error(t.plan_states, t.delta);
  return j;
}

void print_summary(std::ostream& os, const SummaryTable& t) {
  auto cell = [](const std::optional<Stat>& s, int which) -> std::string {
    if (!s) return "-";
    if (which == 3 && !s->std) return "-";
    const double v = which == 0 ? s->min : which == 1 ? s->max : which == 2 ? s->avg : *s->std;
    std::ostringstream o;
    o << std::setprecision(4) << v;
    return o.str();
  };
  auto row = [&](const char* name, const std::optional<Stat>& ok, const std::optional<Stat>& all) {
    os << std::left << std::setw(16) << name;
    for (int w = 0; w < 4; ++w) os << std::right << std::setw(11) << cell(ok, w);
    os << "  |";
    for (int w = 0; w < 4; ++w) os << std::right << std::setw(11) << cell(all, w);
    os << '\n';
  };
  os << std::left << std::setw(16) << "" << std::right << std::setw(44) << "Successful" << "  |"
     << std::setw(44) << "Total" << '\n';
  os << std::left << std::setw(16) << "Experiments" << std::right << std::setw(44) << t.successful.count
     << "  |" << std::setw(44) << t.total.count << '\n';
  os << std::left << std::setw(16) << "";
  for (int k = 0; k < 2; ++k) {
    for (const char* h : {"Min", "Max", "Avg", "Std"}) os << std::right << std::setw(11) << h;
    if (k == 0) os << "  |";
  }
  os << '\n';
  row("Cost J", t.successful.cost, t.total.cost);
  row("Time s", t.successful.time_s, t.total.time_s);
  row("Plan levels", t.successful.levels, t.total.levels);
  row("Plan actions", t.successful.actions, t.total.actions);
  row("Mean RPH h", t.successful.mean_horizon, t.total.mean_horizon);
  os << "success rate " << t.success_rate << " (" << t.successes << '/' << t.total.count
     << "), epsilon " << t.epsilon << ", delta " << t.delta << ", required N " << t.required_samples;
  if (t.budget_exhausted > 0) os << ", budget exhausted in " << t.budget_exhausted;
  os << '\n';
}

void write_pso_trace(std::ostream& os, const std::vector<double>& trace) {
  os << "iteration,best_cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i) os << i << ',' << format_double(trace[i]) << '\n';
}

}  // namespace ares
