#include "aoplan/dynamics.hpp"

#include <cmath>

namespace aoplan {

namespace {

// Partition of [0, duration] into steps of at most dt; the last step takes
// the remainder.
std::vector<double> partition_times(double duration, double dt) {
  std::vector<double> times;
  if (!(dt > 0.0) || !std::isfinite(dt) || duration <= dt) {
    times.push_back(duration);
    return times;
  }
  const auto steps = static_cast<long>(std::ceil(duration / dt - 1e-7));
  times.reserve(static_cast<std::size_t>(steps));
  for (long k = 1; k < steps; ++k) times.push_back(static_cast<double>(k) * dt);
  times.push_back(duration);
  return times;
}

void require_finite(const State& x, const char* where) {
  if (!x.allFinite()) {
    throw IntegrationError(std::string("non-finite state during integration (") + where + ")", x);
  }
}

}  // namespace

void validate(const ControlSystem& sys, Rng& rng, int samples) {
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("control system '" + sys.name + "': " + msg);
  };
  if (sys.dim_state <= 0 || sys.dim_control <= 0) fail("dimensions must be positive");
  if (sys.state_bounds.dim() != sys.dim_state) fail("state bounds dimension mismatch");
  if (static_cast<int>(sys.angular_axes.size()) != sys.dim_state) fail("angular axis mask size mismatch");
  if (sys.start.size() != sys.dim_state) fail("start dimension mismatch");
  if (sys.metric.dim() != sys.dim_state) fail("metric dimension mismatch");
  if (sys.goal_box.dim() != sys.dim_state) fail("goal box dimension mismatch");
  if (!sys.derivative || !sys.incremental_cost || !sys.terminal_cost || !sys.sample_control ||
      !sys.feasible || !sys.in_goal) {
    fail("missing required callable");
  }
  if (sys.mode == IntegrationMode::ClosedForm && (!sys.flow || !sys.flow_cost)) {
    fail("closed-form mode needs flow and flow_cost");
  }
  if (sys.mode == IntegrationMode::Numeric && !(sys.dt > 0.0 && std::isfinite(sys.dt))) {
    fail("numeric mode needs a finite positive dt");
  }
  if (!sys.feasible(sys.start)) fail("start state is infeasible");

  BoxBounds box = sys.state_bounds;
  if (!box.is_finite()) fail("state bounds must be finite");
  for (int i = 0; i < samples; ++i) {
    const State x = sample_uniform(box, rng);
    const ControlSample cs = sys.sample_control(x, rng);
    if (cs.u.size() != sys.dim_control) fail("sampled control has wrong dimension");
    if (!(cs.duration >= 0.0)) fail("sampled duration is negative");
    const double l = sys.incremental_cost(x, cs.u);
    if (!(l >= 0.0)) fail("incremental cost must be non-negative");
    if (!(sys.terminal_cost(x) >= 0.0)) fail("terminal cost must be non-negative");
  }
}

Rollout rollout(const ControlSystem& sys, const State& x0, const Control& u, double duration,
                double cost0) {
  if (x0.size() != sys.dim_state) throw DimensionError("rollout: state dimension mismatch");
  if (u.size() != sys.dim_control) throw DimensionError("rollout: control dimension mismatch");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("rollout: duration must be finite and non-negative");
  }
  Rollout r;
  r.states.push_back(x0);
  r.cost.push_back(cost0);
  if (duration == 0.0) return r;

  const std::vector<double> times = partition_times(duration, sys.dt);
  r.states.reserve(times.size() + 1);
  r.cost.reserve(times.size() + 1);

  if (sys.mode == IntegrationMode::ClosedForm) {
    for (double t : times) {
      State x = sys.flow(x0, u, t);
      require_finite(x, "closed form");
      r.states.push_back(std::move(x));
      r.cost.push_back(cost0 + sys.flow_cost(x0, u, t));
    }
    return r;
  }

  // RK4 on the cost-augmented system [x; c] with c' = L(x, u).
  const int n = sys.dim_state;
  auto f = [&](const State& z) {
    const State x = z.head(n);
    State dz(n + 1);
    dz.head(n) = sys.derivative(x, u);
    dz(n) = sys.incremental_cost(x, u);
    return dz;
  };
  State z(n + 1);
  z << x0, cost0;
  double t_prev = 0.0;
  for (double t : times) {
    const double h = t - t_prev;
    t_prev = t;
    const State k1 = f(z);
    const State k2 = f(z + (h / 2.0) * k1);
    const State k3 = f(z + (h / 2.0) * k2);
    const State k4 = f(z + h * k3);
    z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite(z, "rk4");
    r.states.emplace_back(z.head(n));
    r.cost.push_back(z(n));
  }
  return r;
}

std::vector<State> integrate(const ControlSystem& sys, const State& x0, const Control& u,
                             double duration) {
  return rollout(sys, x0, u, duration).states;
}

bool check_segment_feasible(const ControlSystem& sys, const std::vector<State>& states) {
  for (const State& x : states) {
    if (!sys.feasible(x)) return false;
  }
  if (sys.segment_feasible) {
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (!sys.segment_feasible(states[i - 1], states[i])) return false;
    }
  }
  return true;
}

double Trajectory::duration() const {
  double s = 0.0;
  for (const Segment& seg : segments) s += seg.duration;
  return s;
}

void Trajectory::check_chained(double tol) const {
  const State* prev = &start;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    if (seg.duration < 0.0) throw std::logic_error("trajectory: negative duration");
    if (seg.from.size() != prev->size() || (seg.from - *prev).cwiseAbs().maxCoeff() > tol) {
      throw std::logic_error("trajectory: segment " + std::to_string(i) + " does not chain");
    }
    prev = &seg.to;
  }
}

double running_cost(const ControlSystem& sys, const Trajectory& t) {
  double c = 0.0;
  for (const Segment& seg : t.segments) {
    c = rollout(sys, seg.from, seg.u, seg.duration, c).cost.back();
  }
  return c;
}

double trajectory_cost(const ControlSystem& sys, const Trajectory& t) {
  return running_cost(sys, t) + sys.terminal_cost(t.end());
}

bool replay_feasible(const ControlSystem& sys, const Trajectory& t, double tol) {
  try {
    t.check_chained(tol);
  } catch (const std::logic_error&) {
    return false;
  }
  if (!sys.feasible(t.start)) return false;
  for (const Segment& seg : t.segments) {
    const Rollout r = rollout(sys, seg.from, seg.u, seg.duration);
    if (!check_segment_feasible(sys, r.states)) return false;
    if ((r.states.back() - seg.to).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace aoplan
