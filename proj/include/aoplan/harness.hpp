#pragma once

#include "aoplan/meta.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aoplan {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MetaAlgorithm { Ao, Restart, RestartPrune };

struct PlannerSpec {
  MetaAlgorithm algorithm = MetaAlgorithm::Ao;
  PlannerKind kind = PlannerKind::Est;
};

/// Parses "ao-rrt", "ao-est", "m-rrt", "m-rrt-prune", "m-est", "m-est-prune".
PlannerSpec parse_planner_spec(const std::string& s);
std::string to_string(const PlannerSpec& p);
const std::vector<std::string>& planner_spec_names();

struct RunConfig {
  std::string problem = "kink";
  std::string planner = "ao-est";
  double time_limit_s = 10.0;
  int runs = 10;
  std::uint64_t base_seed = 1;
  std::optional<double> cost_weight;
  std::optional<double> goal_bias;
  /// Iteration budget per trial; with it set, runs are deterministic.
  std::optional<std::int64_t> max_iterations;
  /// Cadence of periodic samples: every `sample_every_s` seconds, or every
  /// `sample_every_iters` planner iterations when set.
  double sample_every_s = 0.5;
  std::optional<std::int64_t> sample_every_iters;
  std::optional<std::int64_t> mx_call_iterations;
  std::optional<int> n_candidates;
  std::optional<int> control_samples;
  int jobs = 1;
  std::string out_dir = ".";
  std::string fixtures_dir;

  /// Throws ConfigError on bad values or unknown names.
  void validate() const;
  MetaConfig meta_config() const;
  Budget budget() const;
};

struct TrialSample {
  double wall_s = 0.0;
  double best_cost = kInf;
  std::int64_t tree_size = 0;
  int meta_iter = 0;
  bool operator==(const TrialSample&) const = default;
};

struct TrialRecord {
  std::string problem;
  std::string planner;
  std::uint64_t seed = 0;
  std::vector<TrialSample> samples;
  double final_cost = kInf;
  std::vector<CostEvent> events;
  std::int64_t planner_iterations = 0;

  double first_solution_s() const { return events.empty() ? kInf : events.front().wall_s; }
};

/// Runs one seeded trial.
TrialRecord run_trial(const RunConfig& cfg, std::uint64_t seed);

/// Seeds base_seed .. base_seed + runs - 1, up to `jobs` at a time. The
/// problem and planner are resolved before any trial starts.
std::vector<TrialRecord> run_benchmark(const RunConfig& cfg);

/// Mean cost over runs on a uniform time grid, step-hold. Runs without a
/// solution yet at time t are excluded and counted.
struct AggregateCurve {
  std::vector<double> time;
  std::vector<double> mean_cost;  // NaN where every run is excluded
  std::vector<int> included;
  std::vector<int> excluded;
};

AggregateCurve aggregate(const std::vector<TrialRecord>& records, double t_end, double grid_dt = 0.1);

/// Mean cost and time of the i-th solution over the runs that reached it.
struct SolutionCurve {
  std::vector<double> mean_cost;
  std::vector<double> mean_wall_s;
  std::vector<int> count;
};

SolutionCurve aggregate_by_solution(const std::vector<TrialRecord>& records);

/// CSV with header `problem,planner,seed,wall_s,best_cost,tree_size,meta_iter`.
/// Throws std::logic_error if a record's best_cost ever increases.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// Inverse of `write_trials_csv` for the CSV fields.
std::vector<TrialRecord> parse_trials_csv(std::istream& in);

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve);
/// CSV `solution,mean_cost,mean_wall_s,count`, solution 0 being the first path.
void write_solution_csv(std::ostream& out, const SolutionCurve& curve);
void write_summary_json(std::ostream& out, const RunConfig& cfg, const std::vector<TrialRecord>& records,
                        const AggregateCurve& curve);

/// Writes `<problem>_<planner><suffix>.csv`, `..._aggregate.csv`,
/// `..._solutions.csv` and `..._summary.json` into cfg.out_dir. Returns the
/// trials CSV path.
std::string write_outputs(const RunConfig& cfg, const std::vector<TrialRecord>& records,
                          const std::string& suffix = "");

struct BoundCurveSet {
  std::string label;
  double alpha_beta = 0.0;
};

/// Easy, medium and hard expansiveness settings.
const std::vector<BoundCurveSet>& bound_curve_sets();
inline constexpr double kSamplesPerSecond = 1000.0;

/// CSV `g,easy_s,medium_s,hard_s`: the EST runtime bound in seconds over
/// `n` goal volumes from `goal_volume_grid`.
void emit_bound_curves(std::ostream& out, int n = 100);

/// Repeats the benchmark for each cost weight, writing one output set per weight.
std::vector<std::vector<TrialRecord>> sweep_cost_weights(const RunConfig& cfg, const std::vector<double>& weights);

/// Shortest decimal that parses back to the same double; "inf"/"-inf"/"nan".
std::string format_double(double d);
double parse_double(const std::string& s);

}  // namespace aoplan
