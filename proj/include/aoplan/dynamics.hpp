#pragma once

#include "aoplan/core_space.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoplan {

enum class IntegrationMode { Numeric, ClosedForm };

struct ControlSample {
  Control u;
  double duration = 0.0;
};

/// Thrown when the dynamics produce a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, State offending)
      : std::runtime_error(what), state(std::move(offending)) {}
  State state;
};

/// An optimal planning problem (L, Phi, X, U, x_I, G, F, B, D) as callables.
///
/// `flow`/`flow_cost` are required in closed-form mode and give the exact
/// state and accumulated incremental cost after holding `u` for time t.
/// `steer_control` and `segment_feasible` are optional: kinematic problems use
/// them to aim extensions and to test straight segments exactly.
struct ControlSystem {
  std::string name;
  int dim_state = 0;
  int dim_control = 0;
  BoxBounds state_bounds;
  std::vector<bool> angular_axes;

  std::function<State(const State&, const Control&)> derivative;
  std::function<double(const State&, const Control&)> incremental_cost;
  std::function<double(const State&)> terminal_cost;
  std::function<ControlSample(const State&, Rng&)> sample_control;
  std::function<ControlSample(const State& from, const State& target, Rng&)> steer_control;
  std::function<bool(const State&)> feasible;
  std::function<bool(const State&, const State&)> segment_feasible;
  std::function<bool(const State&)> in_goal;
  BoxBounds goal_box;
  std::function<double(const State&)> heuristic;
  State start;

  IntegrationMode mode = IntegrationMode::Numeric;
  /// Step for numeric integration; partition resolution for feasibility
  /// checks in closed-form mode (infinite means endpoints only).
  double dt = 0.01;
  std::function<State(const State&, const Control&, double)> flow;
  std::function<double(const State&, const Control&, double)> flow_cost;

  Metric metric;
  /// Rough magnitude of solution costs, used to scale the cost axis before
  /// any solution is known.
  double cost_scale_hint = 1.0;

  double h(const State& x) const { return heuristic ? heuristic(x) : 0.0; }
};

/// Checks dimensions, bounds, the start state, and L >= 0 on sampled
/// (state, control) pairs. Throws std::invalid_argument on violation.
void validate(const ControlSystem& sys, Rng& rng, int samples = 256);

/// States along one held control at integration resolution, with the
/// running incremental cost (starting from `cost0`) at each state.
struct Rollout {
  std::vector<State> states;
  std::vector<double> cost;
};

Rollout rollout(const ControlSystem& sys, const State& x0, const Control& u, double duration,
                double cost0 = 0.0);

/// States at integration resolution, x0 first and final state last.
std::vector<State> integrate(const ControlSystem& sys, const State& x0, const Control& u,
                             double duration);

bool check_segment_feasible(const ControlSystem& sys, const std::vector<State>& states);

struct Segment {
  State from;
  Control u;
  double duration = 0.0;
  State to;
};

struct Trajectory {
  State start;
  std::vector<Segment> segments;
  double total_cost = kInf;

  const State& end() const { return segments.empty() ? start : segments.back().to; }
  double duration() const;
  /// Throws if segment endpoints do not chain or a duration is negative.
  void check_chained(double tol = 1e-9) const;
};

/// Integral of L over the trajectory (same partition as `rollout`).
double running_cost(const ControlSystem& sys, const Trajectory& t);

/// C(y) = integral of L + Phi(y(S)).
double trajectory_cost(const ControlSystem& sys, const Trajectory& t);

/// Replays every segment and checks it against the dynamics and constraints.
bool replay_feasible(const ControlSystem& sys, const Trajectory& t, double tol = 1e-9);

}  // namespace aoplan
