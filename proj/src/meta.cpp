#include "aoplan/meta.hpp"

#include <cmath>

namespace aoplan {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Budget: return "budget";
    case Termination::NoSolutionFound: return "no-solution-found";
    case Termination::Infeasible: return "infeasible";
    case Termination::Converged: return "converged";
  }
  return "unknown";
}

MetaResult bounded_suboptimal(double eps, const CompletePlanner& planner, Budget budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("bounded_suboptimal: eps must be positive");
  if (!planner) throw std::invalid_argument("bounded_suboptimal: null planner");
  BudgetTracker clock(budget);
  MetaResult r;
  std::optional<Trajectory> y = planner(kInf);
  clock.tick();
  if (!y) {
    r.termination = Termination::Infeasible;
    return r;
  }
  r.cost_sequence.push_back(CostEvent{0, y->total_cost, clock.elapsed(), clock.iterations()});
  r.best = std::move(y);
  for (;;) {
    if (clock.exhausted()) {
      r.termination = Termination::Budget;
      return r;
    }
    std::optional<Trajectory> next = planner(r.best_cost() - eps);
    clock.tick();
    if (!next) {
      r.termination = Termination::Converged;
      return r;
    }
    ++r.iterations_run;
    r.cost_sequence.push_back(CostEvent{r.iterations_run, next->total_cost, clock.elapsed(), clock.iterations()});
    r.best = std::move(next);
  }
}

namespace {

struct Run {
  MetaResult result;
  BudgetTracker clock;
  const MetaObserver& observer;
  const TreePlanner* planner = nullptr;

  std::function<void()> iteration_hook() {
    if (!observer.on_iteration) return {};
    return [this] {
      Progress p;
      p.wall_s = clock.elapsed();
      p.planner_iterations = clock.iterations();
      p.best_cost = result.best_cost();
      p.tree_size = static_cast<std::size_t>(planner->tree().size());
      p.meta_iteration = static_cast<int>(result.cost_sequence.size());
      observer.on_iteration(p);
    };
  }

  void record(const Trajectory& lifted_path) {
    CostEvent e;
    e.iteration = static_cast<int>(result.cost_sequence.size());
    e.cost = lifted_path.total_cost;
    e.wall_s = clock.elapsed();
    e.planner_iterations = clock.iterations();
    result.cost_sequence.push_back(e);
    result.best = project(lifted_path);
    if (observer.on_solution) observer.on_solution(e);
  }

  MetaResult finish() {
    result.planner_iterations = clock.iterations();
    result.iterations_run = static_cast<int>(result.cost_sequence.size());
    if (result.termination != Termination::Converged) {
      result.termination = result.cost_sequence.empty() ? Termination::NoSolutionFound : Termination::Budget;
    }
    return std::move(result);
  }
};

}  // namespace

MetaResult ao_plan(std::shared_ptr<const ControlSystem> problem, PlannerKind kind, const MetaConfig& cfg,
                   Budget budget, Rng& rng, const MetaObserver& observer) {
  std::unique_ptr<TreePlanner> planner = make_planner(kind, lift(std::move(problem), cfg.cost_weight), cfg.planner);
  Run run{MetaResult{}, BudgetTracker(budget), observer, planner.get()};
  const std::function<void()> hook = run.iteration_hook();

  CostBoundedGoal goal;
  while (!run.clock.exhausted()) {
    FeasibleResult f = plan_feasible(*planner, goal, goal.cbar, run.clock, rng, hook);
    if (!f.path) break;
    const double c = f.path->total_cost;
    if (!(c < goal.cbar)) throw std::logic_error("ao_plan: solution cost did not decrease");
    run.record(*f.path);
    if (!(c > 0.0)) {
      run.result.termination = Termination::Converged;
      break;
    }
    goal = CostBoundedGoal(c);
    planner->set_cost_scale(c);
    planner->prune(c);
  }
  return run.finish();
}

MetaResult m_x_plan(std::shared_ptr<const ControlSystem> problem, PlannerKind kind, const MetaConfig& cfg,
                    Budget budget, bool prune, Rng& rng, const MetaObserver& observer) {
  if (cfg.mx_call_iterations < 1) throw std::invalid_argument("m_x_plan: per-call iteration cap must be positive");
  std::unique_ptr<TreePlanner> planner = make_planner(kind, lift(std::move(problem), cfg.cost_weight), cfg.planner);
  Run run{MetaResult{}, BudgetTracker(budget), observer, planner.get()};
  const std::function<void()> hook = run.iteration_hook();

  const CostBoundedGoal goal;
  bool first = true;
  while (!run.clock.exhausted()) {
    const double best = run.result.best_cost();
    if (!first) {
      if (std::isfinite(best) && best > 0.0) planner->set_cost_scale(best);
      planner->reset();
    }
    first = false;
    const double prune_bound = prune ? best : kInf;
    FeasibleResult f =
        plan_feasible(*planner, goal, prune_bound, run.clock, rng, hook, cfg.mx_call_iterations);
    const std::optional<Trajectory>& path = f.path;
    if (path && path->total_cost < best) {
      run.record(*path);
      if (!(path->total_cost > 0.0)) {
        run.result.termination = Termination::Converged;
        break;
      }
    }
  }
  return run.finish();
}

ShrinkageEstimate shrinkage_diagnostic(std::shared_ptr<const ControlSystem> problem, PlannerKind kind,
                                       const MetaConfig& cfg, double cbar, double c_star, int n_trials,
                                       Budget per_trial, Rng& rng) {
  if (n_trials < 1) throw std::invalid_argument("shrinkage_diagnostic: n_trials must be positive");
  const LiftedSystem lifted = lift(std::move(problem), cfg.cost_weight);
  ShrinkageEstimate est;
  est.cbar = cbar;
  est.c_star = c_star;
  est.n_trials = n_trials;
  const CostBoundedGoal goal(cbar);
  for (int t = 0; t < n_trials; ++t) {
    std::unique_ptr<TreePlanner> planner = make_planner(kind, lifted, cfg.planner);
    if (std::isfinite(cbar)) {
      planner->set_cost_scale(cbar);
      planner->rebuild_indices();
    }
    BudgetTracker clock(per_trial);
    FeasibleResult f = plan_feasible(*planner, goal, cbar, clock, rng);
    if (f.path) {
      est.costs.push_back(f.path->total_cost);
    } else {
      ++est.n_failed;
    }
  }
  est.n_success = static_cast<int>(est.costs.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (est.n_success == 0) {
    est.mean = est.sd = est.w_hat = est.w_lower95 = nan;
    return est;
  }
  double sum = 0.0;
  for (double c : est.costs) sum += c;
  est.mean = sum / est.n_success;
  double ss = 0.0;
  for (double c : est.costs) ss += (c - est.mean) * (c - est.mean);
  est.sd = est.n_success > 1 ? std::sqrt(ss / (est.n_success - 1)) : 0.0;
  if (std::isinf(cbar)) {
    est.w_hat = est.w_lower95 = nan;
    return est;
  }
  const double gap = cbar - c_star;
  const double mean_upper = est.mean + 1.6448536269514722 * est.sd / std::sqrt(double(est.n_success));
  est.w_hat = 1.0 - (est.mean - c_star) / gap;
  est.w_lower95 = 1.0 - (mean_upper - c_star) / gap;
  return est;
}

EstRuntimeBound est_runtime_bound(double g, double alpha, double beta) {
  if (!(g > 0.0 && g < 1.0)) throw std::domain_error("est_runtime_bound: goal volume must lie in (0, 1)");
  if (!(alpha > 0.0 && beta > 0.0)) throw std::domain_error("est_runtime_bound: alpha and beta must be positive");
  EstRuntimeBound b;
  b.gamma = 8.0 / beta;
  b.delta = alpha * beta / (2.0 + 2.0 * alpha * beta);
  const double dg = b.delta * g;
  b.expected_samples = (std::log(b.gamma) + std::log(std::log(1.0 / g))) / dg + -1.0 / std::expm1(-dg);
  return b;
}

std::vector<double> goal_volume_grid(int n) {
  if (n < 1) throw std::invalid_argument("goal_volume_grid: n must be positive");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = std::pow(10.0, -3.0 + 3.0 * k / n);
  return g;
}

}  // namespace aoplan
