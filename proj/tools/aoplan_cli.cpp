// Command-line front end: seeded benchmarks, cost-weight sweeps and EST
// runtime-bound curves.

#include "aoplan/harness.hpp"
#include "aoplan/problems.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFixture = 3;

// Config file keys are the long flag names with '-' replaced by '_'.
void apply_config_file(const std::string& path, aoplan::RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw aoplan::ConfigError("cannot open config file '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    for (const auto& [key, v] : j.items()) {
      if (key == "problem") cfg.problem = v.get<std::string>();
      else if (key == "planner") cfg.planner = v.get<std::string>();
      else if (key == "time_limit") cfg.time_limit_s = v.get<double>();
      else if (key == "runs") cfg.runs = v.get<int>();
      else if (key == "seed") cfg.base_seed = v.get<std::uint64_t>();
      else if (key == "cost_weight") cfg.cost_weight = v.get<double>();
      else if (key == "goal_bias") cfg.goal_bias = v.get<double>();
      else if (key == "max_iters") cfg.max_iterations = v.get<std::int64_t>();
      else if (key == "sample_every") cfg.sample_every_s = v.get<double>();
      else if (key == "sample_every_iters") cfg.sample_every_iters = v.get<std::int64_t>();
      else if (key == "mx_call_iters") cfg.mx_call_iterations = v.get<std::int64_t>();
      else if (key == "candidates") cfg.n_candidates = v.get<int>();
      else if (key == "control_samples") cfg.control_samples = v.get<int>();
      else if (key == "jobs") cfg.jobs = v.get<int>();
      else if (key == "out_dir") cfg.out_dir = v.get<std::string>();
      else if (key == "fixtures_dir") cfg.fixtures_dir = v.get<std::string>();
      else throw aoplan::ConfigError("config file: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw aoplan::ConfigError("config file '" + path + "': " + e.what());
  }
}

// Holds the raw flag values; only flags present on the command line are
// applied, after the config file.
class RunFlags {
 public:
  void add_to(CLI::App& app) {
    app.add_option("--config", config_, "JSON config file; command-line flags take precedence");
    add(app, "--problem", problem_, "kink|bugtrap|dubins|double_integrator|pendulum|flappy|flappy_low",
        [this](aoplan::RunConfig& c) { c.problem = problem_; });
    add(app, "--planner", planner_, "ao-rrt|ao-est|m-rrt|m-rrt-prune|m-est|m-est-prune",
        [this](aoplan::RunConfig& c) { c.planner = planner_; });
    add(app, "--time-limit", time_limit_, "Seconds per trial", [this](aoplan::RunConfig& c) { c.time_limit_s = time_limit_; });
    add(app, "--runs", runs_, "Number of seeded trials", [this](aoplan::RunConfig& c) { c.runs = runs_; });
    add(app, "--seed", seed_, "Seed of the first trial", [this](aoplan::RunConfig& c) { c.base_seed = seed_; });
    add(app, "--cost-weight", cost_weight_, "Metric weight of the cost axis",
        [this](aoplan::RunConfig& c) { c.cost_weight = cost_weight_; });
    add(app, "--goal-bias", goal_bias_, "Goal sampling probability",
        [this](aoplan::RunConfig& c) { c.goal_bias = goal_bias_; });
    add(app, "--max-iters", max_iters_, "Planner iteration budget per trial",
        [this](aoplan::RunConfig& c) { c.max_iterations = max_iters_; });
    add(app, "--sample-every", sample_every_, "Sampling cadence in seconds",
        [this](aoplan::RunConfig& c) { c.sample_every_s = sample_every_; });
    add(app, "--sample-every-iters", sample_every_iters_, "Sampling cadence in planner iterations",
        [this](aoplan::RunConfig& c) { c.sample_every_iters = sample_every_iters_; });
    add(app, "--mx-call-iters", mx_call_iters_, "Iteration cap per restart of the m-* planners",
        [this](aoplan::RunConfig& c) { c.mx_call_iterations = mx_call_iters_; });
    add(app, "--candidates", candidates_, "EST candidate extensions per iteration",
        [this](aoplan::RunConfig& c) { c.n_candidates = candidates_; });
    add(app, "--control-samples", control_samples_, "RRT controls tried per extension",
        [this](aoplan::RunConfig& c) { c.control_samples = control_samples_; });
    add(app, "--jobs", jobs_, "Concurrent trials", [this](aoplan::RunConfig& c) { c.jobs = jobs_; });
    add(app, "--out-dir", out_dir_, "Output directory", [this](aoplan::RunConfig& c) { c.out_dir = out_dir_; });
    add(app, "--fixtures-dir", fixtures_dir_, "Directory holding the obstacle fixtures",
        [this](aoplan::RunConfig& c) { c.fixtures_dir = fixtures_dir_; });
  }

  aoplan::RunConfig resolve() const {
    aoplan::RunConfig cfg;
    cfg.fixtures_dir = AOPLAN_FIXTURES_DIR;
    if (!config_.empty()) apply_config_file(config_, cfg);
    for (const auto& [opt, apply] : setters_) {
      if (opt->count() > 0) apply(cfg);
    }
    cfg.validate();
    return cfg;
  }

 private:
  template <typename T>
  void add(CLI::App& app, const std::string& name, T& target, const std::string& help,
           std::function<void(aoplan::RunConfig&)> apply) {
    setters_.emplace_back(app.add_option(name, target, help), std::move(apply));
  }

  std::string config_, problem_, planner_, out_dir_, fixtures_dir_;
  double time_limit_ = 0, cost_weight_ = 0, goal_bias_ = 0, sample_every_ = 0;
  int runs_ = 0, jobs_ = 0, candidates_ = 0, control_samples_ = 0;
  std::uint64_t seed_ = 0;
  std::int64_t max_iters_ = 0, sample_every_iters_ = 0, mx_call_iters_ = 0;
  std::vector<std::pair<CLI::Option*, std::function<void(aoplan::RunConfig&)>>> setters_;
};

void print_summary(const aoplan::RunConfig& cfg, const std::vector<aoplan::TrialRecord>& records,
                   const std::string& label) {
  int solved = 0;
  double sum = 0.0;
  for (const auto& r : records) {
    if (std::isfinite(r.final_cost)) {
      ++solved;
      sum += r.final_cost;
    }
  }
  std::cout << cfg.problem << ' ' << label << ": " << solved << '/' << records.size() << " solved";
  if (solved > 0) std::cout << ", mean final cost " << sum / solved;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotically optimal kinodynamic planning benchmarks"};
  app.require_subcommand(1);

  RunFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "Run seeded trials of one planner on one problem");
  bench_flags.add_to(*bench);

  RunFlags sweep_flags;
  std::vector<double> weights{0.1, 0.3, 1.0, 3.0, 10.0};
  CLI::App* sweep = app.add_subcommand("sweep", "Repeat a benchmark over cost-axis metric weights");
  sweep_flags.add_to(*sweep);
  sweep->add_option("--weights", weights, "Cost weights to sweep")->delimiter(',');

  std::string bound_out = "-";
  int bound_points = 100;
  CLI::App* bounds = app.add_subcommand("bound-curves", "EST runtime bound versus goal volume");
  bounds->add_option("--out", bound_out, "Output CSV path, '-' for stdout");
  bounds->add_option("--points", bound_points, "Number of goal volumes")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (bench->parsed()) {
      const aoplan::RunConfig cfg = bench_flags.resolve();
      const auto records = aoplan::run_benchmark(cfg);
      const std::string path = aoplan::write_outputs(cfg, records);
      print_summary(cfg, records, cfg.planner);
      std::cout << "wrote " << path << '\n';
    } else if (sweep->parsed()) {
      aoplan::RunConfig cfg = sweep_flags.resolve();
      const auto all = aoplan::sweep_cost_weights(cfg, weights);
      for (std::size_t i = 0; i < all.size(); ++i) {
        print_summary(cfg, all[i], cfg.planner + " w_c=" + aoplan::format_double(weights[i]));
      }
    } else if (bounds->parsed()) {
      if (bound_out == "-") {
        aoplan::emit_bound_curves(std::cout, bound_points);
      } else {
        std::ofstream f(bound_out);
        if (!f) throw aoplan::ConfigError("cannot write '" + bound_out + "'");
        aoplan::emit_bound_curves(f, bound_points);
      }
    }
  } catch (const aoplan::FixtureError& e) {
    std::cerr << "fixture error: " << e.what() << '\n';
    return kExitFixture;
  } catch (const aoplan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
