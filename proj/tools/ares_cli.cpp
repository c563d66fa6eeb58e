// ares: plan synthesis, batch evaluation, plan replay, and rendering for
// the V-formation flock.
//
// Exit codes: 0 ok, 1 usage/config error, 2 planning failure,
// 3 verification mismatch.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ares/ares.hpp"
#include "ares/config.hpp"
#include "ares/eval.hpp"
#include "ares/flock_mdp.hpp"
#include "ares/render.hpp"
#include "ares/serialize.hpp"
#include "ares/verify.hpp"

namespace {

using namespace ares;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPlanFailed = 2;
constexpr int kMismatch = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
  std::optional<int> birds;
  std::optional<double> phi;
  std::optional<int> max_levels;
  // plan
  std::string levels;
  // eval
  std::optional<std::int64_t> samples;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> budget;
  std::string records;
  std::string summary;
  bool no_timing = false;
  bool dry_run = false;
  // replay / render
  std::string plan_path;
};

RunConfig build_config(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (const char* env = std::getenv("ARES_WORKERS")) {
    try {
      c.eval.workers = std::stoi(env);
    } catch (const std::exception&) {
      throw InputError("ARES_WORKERS must be an integer");
    }
  }
  if (f.workers) c.eval.workers = *f.workers;
  if (f.seed) c.eval.seed = *f.seed;
  if (f.birds) c.eval.birds = *f.birds;
  if (f.phi) c.eval.ares.phi = *f.phi;
  if (f.max_levels) c.eval.ares.max_levels = *f.max_levels;
  if (f.samples) c.eval.samples = *f.samples;
  if (f.epsilon) c.eval.epsilon = *f.epsilon;
  if (f.delta) c.eval.delta = *f.delta;
  if (f.budget) c.eval.budget_seconds = *f.budget;
  if (!f.records.empty()) c.output.records = f.records;
  if (!f.summary.empty()) c.output.summary = f.summary;
  if (!f.levels.empty()) c.output.levels = f.levels;
  c.eval.validate();
  return c;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

int cmd_plan(const Flags& f) {
  RunConfig c = build_config(f);
  if (!f.out.empty()) c.output.plan = f.out;
  const std::string levels_path = c.output.levels.empty() ? c.output.plan + ".levels.csv" : c.output.levels;
  auto plan_out = open_output(c.output.plan);
  auto levels_out = open_output(levels_path);

  const auto& e = c.eval;
  Rng rng(e.seed);
  const FlockConfig initial = random_initial(rng, e.birds, e.flock, e.spawn);
  const FlockMdp mdp(e.birds, e.flock);
  AresOptions options;
  options.pso = e.pso;
  options.workers = e.workers;
  std::cerr << "planning for " << e.birds << " birds, seed " << e.seed << ", initial cost "
            << mdp.cost(initial) << '\n';
  const auto outcome = ares_plan(mdp, initial, e.ares, e.seed, options);
  write_level_log(levels_out, outcome.attempts);

  std::cerr << (outcome.success ? "success" : "failure") << ": cost " << outcome.final_cost << " after "
            << outcome.levels.size() << " levels, " << outcome.total_actions() << " actions, "
            << outcome.wall_seconds << " s\n";
  if (!outcome.success) {
    plan_out.close();
    std::filesystem::remove(c.output.plan);
    return kPlanFailed;
  }
  PlanHeader header{"flock", true, e.ares.phi, e.seed, params_digest(e)};
  plan_out << plan_to_json(header, *outcome.plan).dump(2) << '\n';
  if (!plan_out) throw InputError("failed writing " + c.output.plan);
  return kOk;
}

int cmd_eval(const Flags& f) {
  RunConfig c = build_config(f);
  if (!f.out.empty()) c.output.summary = f.out;
  auto& e = c.eval;
  const std::int64_t required = required_samples(e.epsilon, e.delta);
  if (!e.samples)
    std::cout << "N = " << required << " experiments for epsilon " << e.epsilon << ", delta " << e.delta
              << '\n';
  if (f.dry_run) {
    std::cout << "dry run: " << e.sample_count() << " experiments with " << e.birds << " birds\n";
    return kOk;
  }
  auto records_out = open_output(c.output.records);
  auto summary_out = open_output(c.output.summary);

  const auto records = run_experiments(e);
  write_records_csv(records_out, records, f.no_timing ? Timing::Omit : Timing::Include);
  const auto table = summarize(records, e.epsilon, e.delta);
  summary_out << summary_to_json(table, static_cast<std::int64_t>(records.size())).dump(2) << '\n';
  print_summary(std::cout, table);
  return kOk;
}

int cmd_replay(const Flags& f) {
  const RunConfig c = build_config(f);
  const ReplayReport r = verify_plan(read_json_file(f.plan_path), c.eval);
  if (!r.ok()) {
    std::cerr << "mismatch: " << r.message << '\n';
    return kMismatch;
  }
  std::cout << "replay ok: cost " << format_double(r.replayed_cost) << ", " << r.levels << " levels, "
            << r.actions << " actions\n";
  return kOk;
}

int cmd_render(const Flags& f) {
  const RunConfig c = build_config(f);
  const json doc = read_json_file(f.plan_path);
  if (plan_header_from_json(doc).mdp != "flock") throw InputError("render supports flock plans only");
  const auto plan = plan_from_json<FlockConfig>(doc).plan;
  const std::string dir = f.out.empty() ? "frames" : f.out;
  for (const auto& p : render_plan(plan, c.eval.flock, dir)) std::cout << p << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive receding-horizon plan synthesis for V-formation flocks"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON config of flat dotted keys");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--out", f.out, "output path (plan JSON, summary JSON, or render directory)");
  app.add_option("--workers", f.workers, "worker threads (default: $ARES_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  auto* plan = app.add_subcommand("plan", "synthesise one plan from a random initial flock");
  plan->add_option("--birds,-b", f.birds, "bird count")->check(CLI::Range(1, 10000));
  plan->add_option("--phi", f.phi, "success threshold on the cost");
  plan->add_option("--levels-log", f.levels, "level log CSV (default: <out>.levels.csv)");
  plan->add_option("--max-levels,-m", f.max_levels, "maximum number of levels");

  auto* eval = app.add_subcommand("eval", "Monte-Carlo success-rate evaluation");
  eval->add_option("--birds,-b", f.birds, "bird count")->check(CLI::Range(1, 10000));
  eval->add_option("--phi", f.phi, "success threshold on the cost");
  eval->add_option("--max-levels,-m", f.max_levels, "maximum number of levels");
  eval->add_option("-N,--samples", f.samples, "experiment count (default: from epsilon, delta)")
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--epsilon", f.epsilon, "absolute error");
  eval->add_option("--delta", f.delta, "one minus confidence");
  eval->add_option("--budget", f.budget, "wall-clock seconds per experiment (<= 0: none)");
  eval->add_option("--records", f.records, "records CSV path");
  eval->add_option("--summary", f.summary, "summary JSON path (same as --out)");
  eval->add_flag("--no-timing", f.no_timing, "leave time_s empty in the records CSV");
  eval->add_flag("--dry-run", f.dry_run, "print the experiment count and exit");

  auto* replay_cmd = app.add_subcommand("replay", "replay a plan and verify its final cost");
  replay_cmd->add_option("plan", f.plan_path, "plan JSON")->required();
  replay_cmd->add_option("--phi", f.phi, "success threshold the plan was made with");
  replay_cmd->add_option("--max-levels,-m", f.max_levels, "maximum number of levels the plan was made with");

  auto* render = app.add_subcommand("render", "write SVG key frames of a plan");
  render->add_option("plan", f.plan_path, "plan JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*plan) return cmd_plan(f);
    if (*eval) return cmd_eval(f);
    if (*replay_cmd) return cmd_replay(f);
    if (*render) return cmd_render(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
