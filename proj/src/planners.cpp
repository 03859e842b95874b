#include "aoplan/planners.hpp"

#include <algorithm>
#include <cmath>

namespace aoplan {

void PlannerConfig::validate() const {
  if (!(goal_bias >= 0.0 && goal_bias < 1.0)) throw std::invalid_argument("goal_bias must lie in [0, 1)");
  if (n_candidates < 1) throw std::invalid_argument("n_candidates must be at least 1");
  if (!(selection_exponent >= 0.0)) throw std::invalid_argument("selection_exponent must be non-negative");
  if (density_k < 1) throw std::invalid_argument("density_k must be at least 1");
  if (!(density_h > 0.0)) throw std::invalid_argument("density_h must be positive");
  if (control_samples < 1) throw std::invalid_argument("control_samples must be at least 1");
  if (kd_leaf_size < 1) throw std::invalid_argument("kd_leaf_size must be at least 1");
}

std::string to_string(PlannerKind k) { return k == PlannerKind::Rrt ? "rrt" : "est"; }

PlannerKind parse_planner_kind(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "rrt") return PlannerKind::Rrt;
  if (t == "est") return PlannerKind::Est;
  throw std::invalid_argument("unknown planner '" + s + "'");
}

BudgetTracker::BudgetTracker(Budget budget) : budget_(budget), start_(std::chrono::steady_clock::now()) {}

double BudgetTracker::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool BudgetTracker::exhausted() const {
  if (budget_.iterations && iterations_ >= *budget_.iterations) return true;
  if (budget_.seconds && elapsed() >= *budget_.seconds) return true;
  return false;
}

TreePlanner::TreePlanner(LiftedSystem sys, PlannerConfig cfg)
    : sys_(std::move(sys)), cfg_(cfg), tree_(sys_.dim(), sys_.system.dim_control),
      cost_scale_(sys_.system.cost_scale_hint) {
  cfg_.validate();
  if (!sys_.base->state_bounds.is_finite()) throw std::invalid_argument("planner needs finite state bounds");
  tree_.add_root(sys_.system.start);
}

void TreePlanner::set_cost_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("cost scale must be positive and finite");
  cost_scale_ = scale;
}

void TreePlanner::reset() {
  tree_.clear();
  tree_.add_root(sys_.system.start);
  rebuild_indices();
}

std::size_t TreePlanner::prune(double cbar) {
  if (std::isinf(cbar)) return 0;
  const int n = tree_.size();
  std::vector<char> keep(static_cast<std::size_t>(n), 1);
  for (int v = 1; v < n; ++v) {
    const bool parent_kept = keep[static_cast<std::size_t>(tree_.parent(v))] != 0;
    keep[static_cast<std::size_t>(v)] = parent_kept && !should_prune(tree_.state(v), cbar, *sys_.base);
  }
  tree_.compact(keep);
  rebuild_indices();
  return static_cast<std::size_t>(n - tree_.size());
}

State TreePlanner::sample_goal_state(Rng& rng) const {
  const ControlSystem& base = *sys_.base;
  BoxBounds box = base.goal_box;
  // Clip the goal box to the state bounds so rejection sampling stays finite.
  box.lo = box.lo.cwiseMax(base.state_bounds.lo);
  box.hi = box.hi.cwiseMin(base.state_bounds.hi);
  if ((box.hi.array() >= box.lo.array()).all()) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      State x = sample_uniform(box, rng);
      if (base.in_goal(x)) return x;
    }
  }
  return sample_uniform(base.state_bounds, rng);
}

State TreePlanner::sample_target(const CostBoundedGoal& goal, double prune_bound, Rng& rng) const {
  const bool to_goal = uniform01(rng) < cfg_.goal_bias;
  const State x = to_goal ? sample_goal_state(rng) : sample_uniform(sys_.base->state_bounds, rng);
  double cmax = std::min(goal.cbar, prune_bound);
  if (std::isinf(cmax)) cmax = tree_.max_cost();
  State z(x.size() + 1);
  z << x, cmax * uniform01(rng);
  return z;
}

std::optional<State> TreePlanner::try_extension(int from, const ControlSample& cs, double prune_bound) const {
  if (!(cs.duration > 0.0) || !std::isfinite(cs.duration)) return std::nullopt;
  const State z0 = tree_.state(from);
  Rollout r;
  try {
    r = rollout(sys_.system, z0, cs.u, cs.duration);
  } catch (const IntegrationError&) {
    return std::nullopt;
  }
  State& z1 = r.states.back();
  if (should_prune(z1, prune_bound, *sys_.base)) return std::nullopt;
  if (!check_segment_feasible(sys_.system, r.states)) return std::nullopt;
  return std::move(z1);
}

RrtPlanner::RrtPlanner(LiftedSystem sys, PlannerConfig cfg)
    : TreePlanner(std::move(sys), cfg), index_(sys_.system.metric, cfg_.kd_leaf_size) {
  rebuild_indices();
}

void RrtPlanner::rebuild_indices() {
  index_.clear();
  for (int v = 0; v < tree_.size(); ++v) index_.insert(v, tree_.state(v));
  index_.rebuild();
}

ExtendResult RrtPlanner::extend(const CostBoundedGoal& goal, double prune_bound, Rng& rng) {
  const State target = sample_target(goal, prune_bound, rng);
  const int near = index_.nearest(target);
  const State z_near = tree_.state(near);
  const ControlSystem& s = sys_.system;

  std::optional<State> best;
  Control best_u;
  double best_duration = 0.0;
  double best_d2 = kInf;
  for (int k = 0; k < cfg_.control_samples; ++k) {
    const ControlSample cs = s.steer_control ? s.steer_control(z_near, target, rng) : s.sample_control(z_near, rng);
    std::optional<State> z = try_extension(near, cs, prune_bound);
    if (!z) continue;
    const double d2 = squared_distance(s.metric, *z, target);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = std::move(z);
      best_u = cs.u;
      best_duration = cs.duration;
    }
  }
  if (!best) return {};
  const int id = tree_.add(near, *best, best_u, best_duration);
  index_.insert(id, tree_.state(id));
  return ExtendResult{true, id};
}

double est_selection_weight(int n, double exponent) {
  return 1.0 / std::pow(static_cast<double>(n) + 1.0, exponent);
}

std::size_t select_weighted(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("select_weighted: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("select_weighted: bad weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("select_weighted: weights sum to zero");
  const double r = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  // Rounding can leave r at the very top; return the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

EstPlanner::EstPlanner(LiftedSystem sys, PlannerConfig cfg)
    : TreePlanner(std::move(sys), cfg), grid_(sys_.dim(), cfg_.density_k, cfg_.density_h) {
  rebuild_indices();
}

State EstPlanner::unit_point(const Eigen::Ref<const State>& z) const {
  const ControlSystem& base = *sys_.base;
  const int n = base.dim_state;
  State x = z.head(n);
  for (int i = 0; i < n; ++i) {
    if (base.angular_axes[static_cast<std::size_t>(i)]) x(i) = wrap_angle(x(i));
  }
  State u(n + 1);
  u.head(n) = scale_to_unit(x, base.state_bounds);
  u(n) = z(n) / cost_scale_;
  return u;
}

void EstPlanner::rebuild_indices() {
  grid_.clear();
  for (int v = 0; v < tree_.size(); ++v) grid_.insert(v, unit_point(tree_.state(v)));
}

ExtendResult EstPlanner::extend(const CostBoundedGoal& goal, double prune_bound, Rng& rng) {
  (void)goal;
  struct Candidate {
    int source;
    ControlSample cs;
    State z;
  };
  std::vector<Candidate> feasible;
  feasible.reserve(static_cast<std::size_t>(cfg_.n_candidates));
  const ControlSystem& s = sys_.system;
  for (int k = 0; k < cfg_.n_candidates; ++k) {
    const int src = grid_.sample_source(rng);
    ControlSample cs = s.sample_control(tree_.state(src), rng);
    std::optional<State> z = try_extension(src, cs, prune_bound);
    if (z) feasible.push_back(Candidate{src, std::move(cs), std::move(*z)});
  }
  if (feasible.empty()) return {};

  std::size_t pick = 0;
  if (feasible.size() > 1) {
    if (uniform01(rng) < cfg_.goal_bias) {
      // Goal bias: the candidate ending nearest a goal sample.
      const State g = sample_goal_state(rng);
      const Metric& m = sys_.base->metric;
      const int n = sys_.base_dim();
      double best = kInf;
      for (std::size_t i = 0; i < feasible.size(); ++i) {
        const double d = squared_distance(m, feasible[i].z.head(n), g);
        if (d < best) {
          best = d;
          pick = i;
        }
      }
    } else {
      std::vector<double> w(feasible.size());
      for (std::size_t i = 0; i < feasible.size(); ++i) {
        w[i] = est_selection_weight(grid_.count(unit_point(feasible[i].z)), cfg_.selection_exponent);
      }
      pick = select_weighted(w, rng);
    }
  }
  const Candidate& c = feasible[pick];
  const int id = tree_.add(c.source, c.z, c.cs.u, c.cs.duration);
  grid_.insert(id, unit_point(tree_.state(id)));
  return ExtendResult{true, id};
}

std::unique_ptr<TreePlanner> make_planner(PlannerKind kind, LiftedSystem sys, PlannerConfig cfg) {
  if (kind == PlannerKind::Rrt) return std::make_unique<RrtPlanner>(std::move(sys), cfg);
  return std::make_unique<EstPlanner>(std::move(sys), cfg);
}

namespace {

bool accepts(const CostBoundedGoal& goal, const ControlSystem& base, const ControlSystem& lifted,
             const Eigen::Ref<const State>& z) {
  if (!goal_contains(goal, base, z)) return false;
  return std::isinf(goal.cbar) || lifted.terminal_cost(z) < goal.cbar;
}

FeasibleResult solution(const TreePlanner& planner, int node, std::int64_t iterations) {
  FeasibleResult r;
  r.goal_node = node;
  r.iterations = iterations;
  Trajectory t = planner.tree().trajectory_to(node);
  t.total_cost = planner.system().system.terminal_cost(t.end());
  r.path = std::move(t);
  return r;
}

}  // namespace

FeasibleResult plan_feasible(TreePlanner& planner, const CostBoundedGoal& goal, double prune_bound,
                             BudgetTracker& budget, Rng& rng, const std::function<void()>& on_iteration,
                             std::optional<std::int64_t> max_iterations) {
  const ControlSystem& base = *planner.system().base;
  const ControlSystem& lifted = planner.system().system;
  if (planner.tree().empty()) throw std::logic_error("plan_feasible: empty tree");
  if (accepts(goal, base, lifted, planner.tree().state(0))) return solution(planner, 0, 0);

  std::int64_t iters = 0;
  while (!budget.exhausted() && !(max_iterations && iters >= *max_iterations)) {
    const ExtendResult ext = planner.extend(goal, prune_bound, rng);
    budget.tick();
    ++iters;
    if (on_iteration) on_iteration();
    if (ext.added && accepts(goal, base, lifted, planner.tree().state(ext.node))) {
      return solution(planner, ext.node, iters);
    }
  }
  FeasibleResult r;
  r.iterations = iters;
  return r;
}

}  // namespace aoplan
