#pragma once

#include "aoplan/nn_index.hpp"
#include "aoplan/statecost.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace aoplan {

/// Tree of augmented states. Node 0 is the root; a node's parent always has a
/// smaller id. Edges store the held control and its duration; intermediate
/// states are recovered by replaying `rollout`, which is deterministic.
class PlanTree {
 public:
  PlanTree(int dim, int control_dim);

  int add_root(const Eigen::Ref<const State>& z);
  int add(int parent, const Eigen::Ref<const State>& z, const Eigen::Ref<const Control>& u, double duration);

  int size() const { return static_cast<int>(parents_.size()); }
  bool empty() const { return parents_.empty(); }
  int dim() const { return dim_; }
  int control_dim() const { return control_dim_; }

  Eigen::Map<const State> state(int id) const;
  double cost(int id) const { return states_[static_cast<std::size_t>(id) * dim_ + dim_ - 1]; }
  int parent(int id) const { return parents_[static_cast<std::size_t>(id)]; }
  Eigen::Map<const Control> control(int id) const;
  double duration(int id) const { return durations_[static_cast<std::size_t>(id)]; }
  double max_cost() const { return max_cost_; }

  /// Node ids from the root to `id`, inclusive.
  std::vector<int> path_to(int id) const;
  /// Root-to-node trajectory in the tree's (augmented) coordinates.
  Trajectory trajectory_to(int id) const;

  /// Keeps the flagged nodes, renumbering them in order. Every kept node's
  /// parent must be kept. Returns the old-to-new id map (-1 for removed).
  std::vector<int> compact(const std::vector<char>& keep);
  void clear();

 private:
  int dim_;
  int control_dim_;
  std::vector<double> states_;
  std::vector<double> controls_;
  std::vector<double> durations_;
  std::vector<int> parents_;
  double max_cost_ = 0.0;
};

struct PlannerConfig {
  double goal_bias = 0.05;
  int n_candidates = 10;
  double selection_exponent = 2.0;
  int density_k = 3;
  double density_h = 0.1;
  /// RRT: controls tried per extension; the one ending nearest the target wins.
  int control_samples = 1;
  int kd_leaf_size = 16;

  void validate() const;
};

enum class PlannerKind { Rrt, Est };

std::string to_string(PlannerKind k);
PlannerKind parse_planner_kind(const std::string& s);

struct Budget {
  std::optional<double> seconds;
  std::optional<std::int64_t> iterations;

  static Budget wall(double s) { return Budget{s, std::nullopt}; }
  static Budget iters(std::int64_t n) { return Budget{std::nullopt, n}; }
};

/// Monotonic wall clock plus an iteration counter checked against a budget.
class BudgetTracker {
 public:
  explicit BudgetTracker(Budget budget);

  bool exhausted() const;
  void tick() { ++iterations_; }
  std::int64_t iterations() const { return iterations_; }
  double elapsed() const;
  const Budget& budget() const { return budget_; }

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t iterations_ = 0;
};

struct ExtendResult {
  bool added = false;
  int node = -1;
};

/// A feasible tree planner over a lifted system. `goal_cbar` bounds the cost
/// of target samples; `prune_bound` rejects extensions with c + h > bound.
class TreePlanner {
 public:
  TreePlanner(LiftedSystem sys, PlannerConfig cfg);
  virtual ~TreePlanner() = default;
  TreePlanner(const TreePlanner&) = delete;
  TreePlanner& operator=(const TreePlanner&) = delete;

  virtual PlannerKind kind() const = 0;
  virtual ExtendResult extend(const CostBoundedGoal& goal, double prune_bound, Rng& rng) = 0;

  /// Removes every node with c + h(x) > cbar along with its subtree (the root
  /// is always kept), then rebuilds the indices. Returns the number removed.
  std::size_t prune(double cbar);
  /// Scale of the cost axis in the density grid; takes effect on the next rebuild.
  void set_cost_scale(double scale);
  double cost_scale() const { return cost_scale_; }
  /// Back to a single root node at (x_I, 0).
  void reset();
  virtual void rebuild_indices() = 0;

  const PlanTree& tree() const { return tree_; }
  const LiftedSystem& system() const { return sys_; }
  const PlannerConfig& config() const { return cfg_; }

  /// Base-space sample inside the goal: rejection sampling of the goal box
  /// (100 attempts), falling back to a uniform state sample.
  State sample_goal_state(Rng& rng) const;
  /// Augmented target: goal-biased or uniform state, cost in [0, bound].
  State sample_target(const CostBoundedGoal& goal, double prune_bound, Rng& rng) const;

 protected:
  /// Rolls the control out from node `from`; returns the new node's state on
  /// success, nothing when infeasible or pruned.
  std::optional<State> try_extension(int from, const ControlSample& cs, double prune_bound) const;

  LiftedSystem sys_;
  PlannerConfig cfg_;
  PlanTree tree_;
  double cost_scale_;
};

class RrtPlanner final : public TreePlanner {
 public:
  RrtPlanner(LiftedSystem sys, PlannerConfig cfg);
  PlannerKind kind() const override { return PlannerKind::Rrt; }
  ExtendResult extend(const CostBoundedGoal& goal, double prune_bound, Rng& rng) override;
  void rebuild_indices() override;
  const KdTree& index() const { return index_; }

 private:
  KdTree index_;
};

/// Weight of an EST candidate whose terminal cell count is `n`.
double est_selection_weight(int n, double exponent);
/// Index drawn with probability proportional to `weights`.
std::size_t select_weighted(std::span<const double> weights, Rng& rng);

class EstPlanner final : public TreePlanner {
 public:
  EstPlanner(LiftedSystem sys, PlannerConfig cfg);
  PlannerKind kind() const override { return PlannerKind::Est; }
  ExtendResult extend(const CostBoundedGoal& goal, double prune_bound, Rng& rng) override;
  void rebuild_indices() override;
  const DensityGrid& density() const { return grid_; }
  /// Augmented state mapped into the unit cube used by the grid.
  State unit_point(const Eigen::Ref<const State>& z) const;

 private:
  DensityGrid grid_;
};

std::unique_ptr<TreePlanner> make_planner(PlannerKind kind, LiftedSystem sys, PlannerConfig cfg);

struct FeasibleResult {
  std::optional<Trajectory> path;  // augmented coordinates
  int goal_node = -1;
  std::int64_t iterations = 0;
};

/// Extends the planner's tree until a new node enters G_cbar with cost strictly
/// below a finite cbar, the budget runs out, or `max_iterations` extension
/// attempts were made in this call. `on_iteration` runs after every attempt.
FeasibleResult plan_feasible(TreePlanner& planner, const CostBoundedGoal& goal, double prune_bound,
                             BudgetTracker& budget, Rng& rng,
                             const std::function<void()>& on_iteration = {},
                             std::optional<std::int64_t> max_iterations = std::nullopt);

}  // namespace aoplan
