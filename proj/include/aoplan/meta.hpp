#pragma once

#include "aoplan/planners.hpp"

namespace aoplan {

enum class Termination {
  Budget,           // budget ran out; best solution so far returned
  NoSolutionFound,  // budget ran out before any solution
  Infeasible,       // a complete planner reported that P has no solution
  Converged,        // a complete planner found nothing below the last bound, or cost reached 0
};

std::string to_string(Termination t);

struct CostEvent {
  int iteration = 0;  // meta iteration i, 0 for the first path
  double cost = kInf;
  double wall_s = 0.0;
  std::int64_t planner_iterations = 0;
};

struct MetaResult {
  std::optional<Trajectory> best;  // base-space coordinates
  std::vector<CostEvent> cost_sequence;
  int iterations_run = 0;
  std::int64_t planner_iterations = 0;
  Termination termination = Termination::NoSolutionFound;

  double best_cost() const { return cost_sequence.empty() ? kInf : cost_sequence.back().cost; }
};

struct Progress {
  double wall_s = 0.0;
  std::int64_t planner_iterations = 0;
  double best_cost = kInf;
  std::size_t tree_size = 0;
  int meta_iteration = 0;
};

/// Callbacks run on the planning thread. `on_iteration` fires after every
/// extension attempt, `on_solution` after every improvement.
struct MetaObserver {
  std::function<void(const CostEvent&)> on_solution;
  std::function<void(const Progress&)> on_iteration;
};

struct MetaConfig {
  PlannerConfig planner;
  /// Metric weight of the cost axis (RRT nearest-neighbour queries). At 1 a
  /// unit of cost counts as much as a unit of state distance.
  double cost_weight = 1.0;
  /// Iteration cap for each inner call of M-x.
  std::int64_t mx_call_iterations = 200000;
};

/// Feasible planner assumed complete: returns a solution with cost at most
/// `cbar`, or nothing when none exists.
using CompletePlanner = std::function<std::optional<Trajectory>(double cbar)>;

/// Repeatedly tightens the bound to c_{i-1} - eps. `iterations_run` counts
/// the improving calls after the first path.
MetaResult bounded_suboptimal(double eps, const CompletePlanner& planner, Budget budget);

/// Asymptotically optimal planning with a retained, pruned tree.
MetaResult ao_plan(std::shared_ptr<const ControlSystem> problem, PlannerKind kind, const MetaConfig& cfg,
                   Budget budget, Rng& rng, const MetaObserver& observer = {});

/// Restarts the feasible planner from scratch, keeping the best path. With
/// `prune`, extensions with c + h above the incumbent are rejected.
MetaResult m_x_plan(std::shared_ptr<const ControlSystem> problem, PlannerKind kind, const MetaConfig& cfg,
                    Budget budget, bool prune, Rng& rng, const MetaObserver& observer = {});

struct ShrinkageEstimate {
  double cbar = kInf;
  double c_star = 0.0;
  int n_trials = 0;
  int n_success = 0;
  int n_failed = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// 1 - (mean - C*) / (cbar - C*); NaN when cbar is infinite or nothing succeeded.
  double w_hat = 0.0;
  /// One-sided 95% lower confidence bound on w.
  double w_lower95 = 0.0;
  std::vector<double> costs;
};

/// Cost of the next solution under bound `cbar`, over independent fresh
/// trees. Trials that exhaust `per_trial` are excluded and counted.
ShrinkageEstimate shrinkage_diagnostic(std::shared_ptr<const ControlSystem> problem, PlannerKind kind,
                                       const MetaConfig& cfg, double cbar, double c_star, int n_trials,
                                       Budget per_trial, Rng& rng);

struct EstRuntimeBound {
  double gamma = 0.0;
  double delta = 0.0;
  /// Upper bound on the expected number of samples.
  double expected_samples = 0.0;
};

/// Analytic EST runtime bound for goal volume g in (0, 1).
EstRuntimeBound est_runtime_bound(double g, double alpha, double beta);

/// Goal volumes 10^(-3 + 3k/n), k = 0..n-1.
std::vector<double> goal_volume_grid(int n);

}  // namespace aoplan
