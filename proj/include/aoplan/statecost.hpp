#pragma once

#include "aoplan/dynamics.hpp"

#include <memory>

namespace aoplan {

/// z = (x, c): a state with its cost-to-come.
struct AugmentedState {
  State x;
  double c = 0.0;

  State vector() const;
  static AugmentedState from_vector(const Eigen::Ref<const State>& z);
};

/// The state-cost problem: the base system over one extra trailing cost axis
/// with z' = (D(x,u), L(x,u)), zero incremental cost, and terminal cost
/// c + Phi(x). Feasibility and goal membership ignore the cost axis.
struct LiftedSystem {
  std::shared_ptr<const ControlSystem> base;
  ControlSystem system;

  int base_dim() const { return base->dim_state; }
  int dim() const { return system.dim_state; }
};

/// `cost_weight` is the metric weight given to the cost axis.
LiftedSystem lift(std::shared_ptr<const ControlSystem> base, double cost_weight = 0.0);

State project(const Eigen::Ref<const State>& z);
Trajectory project(const Trajectory& lifted);

/// Upper bound on solution cost; +inf is the unbounded first problem.
struct CostBoundedGoal {
  double cbar = kInf;

  explicit CostBoundedGoal(double bound = kInf);
};

/// z in G_cbar: x in G and c <= cbar - Phi(x).
bool goal_contains(const CostBoundedGoal& g, const ControlSystem& base, const AugmentedState& z);
bool goal_contains(const CostBoundedGoal& g, const ControlSystem& base,
                   const Eigen::Ref<const State>& z);

/// True iff c + h(x) > cbar. Equality is retained.
bool should_prune(const AugmentedState& z, double cbar, const std::function<double(const State&)>& h);
bool should_prune(const Eigen::Ref<const State>& z, double cbar, const ControlSystem& base);

}  // namespace aoplan
