#include "aoplan/statecost.hpp"

namespace aoplan {

State AugmentedState::vector() const {
  State z(x.size() + 1);
  z << x, c;
  return z;
}

AugmentedState AugmentedState::from_vector(const Eigen::Ref<const State>& z) {
  return AugmentedState{z.head(z.size() - 1), z(z.size() - 1)};
}

State project(const Eigen::Ref<const State>& z) { return z.head(z.size() - 1); }

Trajectory project(const Trajectory& lifted) {
  Trajectory t;
  t.start = project(lifted.start);
  t.segments.reserve(lifted.segments.size());
  for (const Segment& s : lifted.segments) {
    t.segments.push_back(Segment{project(s.from), s.u, s.duration, project(s.to)});
  }
  t.total_cost = lifted.total_cost;
  return t;
}

LiftedSystem lift(std::shared_ptr<const ControlSystem> base_ptr, double cost_weight) {
  if (!base_ptr) throw std::invalid_argument("lift: null system");
  const ControlSystem& b = *base_ptr;
  const int n = b.dim_state;
  ControlSystem s;
  s.name = b.name + "+cost";
  s.dim_state = n + 1;
  s.dim_control = b.dim_control;
  s.state_bounds = b.state_bounds.with_axis(0.0, kInf, true);
  s.angular_axes = b.angular_axes;
  s.angular_axes.push_back(false);

  // The lambdas hold the shared pointer so the lifted system owns its base.
  auto bp = base_ptr;
  s.derivative = [bp, n](const State& z, const Control& u) {
    const State x = z.head(n);
    State dz(n + 1);
    dz << bp->derivative(x, u), bp->incremental_cost(x, u);
    return dz;
  };
  s.incremental_cost = [](const State&, const Control&) { return 0.0; };
  s.terminal_cost = [bp, n](const State& z) { return z(n) + bp->terminal_cost(z.head(n)); };
  s.sample_control = [bp, n](const State& z, Rng& rng) { return bp->sample_control(z.head(n), rng); };
  if (b.steer_control) {
    s.steer_control = [bp, n](const State& from, const State& target, Rng& rng) {
      return bp->steer_control(from.head(n), target.head(n), rng);
    };
  }
  s.feasible = [bp, n](const State& z) { return bp->feasible(z.head(n)); };
  if (b.segment_feasible) {
    s.segment_feasible = [bp, n](const State& a, const State& c) {
      return bp->segment_feasible(a.head(n), c.head(n));
    };
  }
  s.in_goal = [bp, n](const State& z) { return bp->in_goal(z.head(n)); };
  s.goal_box = b.goal_box.with_axis(0.0, kInf, true);
  s.heuristic = [bp, n](const State& z) { return bp->h(z.head(n)); };
  s.start = AugmentedState{b.start, 0.0}.vector();
  s.mode = b.mode;
  s.dt = b.dt;
  if (b.mode == IntegrationMode::ClosedForm) {
    s.flow = [bp, n](const State& z, const Control& u, double t) {
      State out(n + 1);
      out << bp->flow(z.head(n), u, t), z(n) + bp->flow_cost(z.head(n), u, t);
      return out;
    };
    s.flow_cost = [](const State&, const Control&, double) { return 0.0; };
  }
  s.metric = b.metric.with_cost_axis(cost_weight);
  s.cost_scale_hint = b.cost_scale_hint;
  return LiftedSystem{std::move(base_ptr), std::move(s)};
}

CostBoundedGoal::CostBoundedGoal(double bound) : cbar(bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("cost bound must be positive");
}

bool goal_contains(const CostBoundedGoal& g, const ControlSystem& base, const AugmentedState& z) {
  if (!base.in_goal(z.x)) return false;
  if (std::isinf(g.cbar)) return true;
  return z.c <= g.cbar - base.terminal_cost(z.x);
}

bool goal_contains(const CostBoundedGoal& g, const ControlSystem& base,
                   const Eigen::Ref<const State>& z) {
  return goal_contains(g, base, AugmentedState::from_vector(z));
}

bool should_prune(const AugmentedState& z, double cbar, const std::function<double(const State&)>& h) {
  if (std::isinf(cbar)) return false;
  const double hv = h ? h(z.x) : 0.0;
  return z.c + hv > cbar;
}

bool should_prune(const Eigen::Ref<const State>& z, double cbar, const ControlSystem& base) {
  if (std::isinf(cbar)) return false;
  const int n = static_cast<int>(z.size()) - 1;
  return z(n) + base.h(z.head(n)) > cbar;
}

}  // namespace aoplan
