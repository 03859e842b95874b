#include "aoplan/problems.hpp"

#include <algorithm>
#include <cmath>

namespace aoplan {

namespace {

Eigen::Vector2d xy(const State& x) { return Eigen::Vector2d(x(0), x(1)); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Uniform in (0, hi].
double positive_uniform(Rng& rng, double hi) { return hi * (1.0 - uniform01(rng)); }

Control unit_direction(Rng& rng) {
  const double a = uniform(rng, 0.0, kTwoPi);
  return Control{{std::cos(a), std::sin(a)}};
}

BoxBounds box2(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) { return BoxBounds(State(lo), State(hi)); }

}  // namespace

ControlSystem make_kinematic(const RectObstacleWorld& world) {
  world.validate();
  if (!world.goal_disc) throw std::invalid_argument("kinematic problems need a disc goal");
  const GoalDisc goal = *world.goal_disc;
  auto w = std::make_shared<const RectObstacleWorld>(world);

  ControlSystem s;
  s.name = world.name;
  s.dim_state = 2;
  s.dim_control = 2;
  s.state_bounds = box2(world.domain_lo, world.domain_hi);
  s.angular_axes = {false, false};
  s.derivative = [](const State&, const Control& u) { return State(u); };
  s.incremental_cost = [](const State&, const Control& u) { return u.norm(); };
  s.terminal_cost = [](const State&) { return 0.0; };
  s.sample_control = [](const State&, Rng& rng) {
    return ControlSample{unit_direction(rng), positive_uniform(rng, kinematic::kMaxExpansion)};
  };
  s.steer_control = [](const State& from, const State& target, Rng& rng) {
    const Eigen::Vector2d d = xy(target) - xy(from);
    const double n = d.norm();
    Control u = n > 1e-12 ? Control(d / n) : unit_direction(rng);
    return ControlSample{std::move(u), positive_uniform(rng, kinematic::kMaxExpansion)};
  };
  s.feasible = [w](const State& x) { return w->point_free(xy(x)); };
  s.segment_feasible = [w](const State& a, const State& b) { return w->segment_free(xy(a), xy(b)); };
  s.in_goal = [w](const State& x) { return w->in_goal(xy(x)); };
  s.goal_box = box2(goal.center.array() - goal.tolerance, goal.center.array() + goal.tolerance);
  s.heuristic = [goal](const State& x) { return std::max(0.0, (xy(x) - goal.center).norm() - goal.tolerance); };
  s.start = State(world.start);
  s.mode = IntegrationMode::ClosedForm;
  s.dt = kInf;
  s.flow = [](const State& x, const Control& u, double t) { return State(x + u * t); };
  s.flow_cost = [](const State&, const Control& u, double t) { return u.norm() * t; };
  s.metric = Metric::euclidean(2);
  s.cost_scale_hint = 2.0;
  return s;
}

ControlSystem make_kink(const RectObstacleWorld& world) { return make_kinematic(world); }

ControlSystem make_bugtrap(const RectObstacleWorld& world) { return make_kinematic(world); }

ControlSystem make_dubins() {
  using namespace dubins;
  const State goal{{0.5, 0.7, 0.0}};
  const Metric metric = Metric::weighted(Eigen::Vector3d(1.0, 1.0, 1.0 / kTwoPi), {2});
  const double max_phi = std::atan(kMaxTanSteer);

  ControlSystem s;
  s.name = "dubins";
  s.dim_state = 3;
  s.dim_control = 2;
  s.state_bounds = BoxBounds(State{{0.0, 0.0, 0.0}}, State{{1.0, 1.0, kTwoPi}});
  s.angular_axes = {false, false, true};
  s.derivative = [max_phi](const State& x, const Control& u) {
    const double v = u(0);
    return State{{v * std::cos(x(2)), v * std::sin(x(2)), v * std::tan(std::clamp(u(1), -max_phi, max_phi))}};
  };
  s.incremental_cost = [](const State&, const Control&) { return 1.0; };
  s.terminal_cost = [](const State&) { return 0.0; };
  s.sample_control = [](const State&, Rng& rng) {
    const double v = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    const double phi = uniform(rng, -kPi, kPi);
    return ControlSample{Control{{v, phi}}, uniform(rng, 0.0, kMaxDuration)};
  };
  s.feasible = [](const State& x) { return x(0) >= 0.0 && x(0) <= 1.0 && x(1) >= 0.0 && x(1) <= 1.0; };
  s.in_goal = [goal, metric](const State& x) { return distance(metric, x, goal) <= kGoalTolerance; };
  const double dtheta = kGoalTolerance * std::sqrt(kTwoPi);
  s.goal_box = BoxBounds(State{{0.4, 0.6, -dtheta}}, State{{0.6, 0.8, dtheta}});
  s.heuristic = [goal](const State& x) { return std::max(0.0, std::hypot(x(0) - goal(0), x(1) - goal(1)) - kGoalTolerance); };
  s.start = State{{0.5, 0.3, 0.0}};
  s.mode = IntegrationMode::ClosedForm;
  s.dt = 0.01;
  s.flow = [max_phi](const State& x, const Control& u, double t) {
    const double v = u(0);
    const double omega = v * std::tan(std::clamp(u(1), -max_phi, max_phi));
    if (std::abs(omega) < 1e-12) {
      return State{{x(0) + v * std::cos(x(2)) * t, x(1) + v * std::sin(x(2)) * t, x(2)}};
    }
    const double th = x(2) + omega * t;
    const double r = v / omega;
    return State{{x(0) + r * (std::sin(th) - std::sin(x(2))), x(1) - r * (std::cos(th) - std::cos(x(2))), th}};
  };
  s.flow_cost = [](const State&, const Control&, double t) { return t; };
  s.metric = metric;
  s.cost_scale_hint = 2.0;
  return s;
}

ControlSystem make_double_integrator() {
  using namespace double_integrator;
  const State goal{{0.94, 0.5, 0.0, 0.0}};

  ControlSystem s;
  s.name = "double_integrator";
  s.dim_state = 4;
  s.dim_control = 2;
  s.state_bounds = BoxBounds(State{{0.0, 0.0, -kMaxSpeed, -kMaxSpeed}}, State{{1.0, 1.0, kMaxSpeed, kMaxSpeed}});
  s.angular_axes = {false, false, false, false};
  s.derivative = [](const State& x, const Control& u) { return State{{x(2), x(3), u(0), u(1)}}; };
  s.incremental_cost = [](const State&, const Control&) { return 1.0; };
  s.terminal_cost = [](const State&) { return 0.0; };
  s.sample_control = [](const State&, Rng& rng) {
    Control u{{uniform(rng, -kMaxAccel, kMaxAccel), uniform(rng, -kMaxAccel, kMaxAccel)}};
    return ControlSample{std::move(u), uniform(rng, 0.0, kMaxDuration)};
  };
  const BoxBounds bounds = s.state_bounds;
  s.feasible = [bounds](const State& x) { return bounds.contains(x); };
  s.in_goal = [goal](const State& x) { return (x - goal).norm() <= kGoalTolerance; };
  s.goal_box = BoxBounds(State(goal.array() - kGoalTolerance), State(goal.array() + kGoalTolerance));
  // Speed is at most sqrt(2) under the box velocity bound.
  s.heuristic = [goal](const State& x) {
    return std::max(0.0, (x.head<2>() - goal.head<2>()).norm() - kGoalTolerance) / std::sqrt(2.0);
  };
  s.start = State{{0.06, 0.5, 0.0, 0.0}};
  s.mode = IntegrationMode::ClosedForm;
  s.dt = 0.01;
  s.flow = [](const State& x, const Control& u, double t) {
    return State{{x(0) + x(2) * t + 0.5 * u(0) * t * t, x(1) + x(3) * t + 0.5 * u(1) * t * t, x(2) + u(0) * t,
                  x(3) + u(1) * t}};
  };
  s.flow_cost = [](const State&, const Control&, double t) { return t; };
  s.metric = Metric::euclidean(4);
  s.cost_scale_hint = 2.0;
  return s;
}

ControlSystem make_pendulum() {
  using namespace pendulum;
  ControlSystem s;
  s.name = "pendulum";
  s.dim_state = 2;
  s.dim_control = 1;
  s.state_bounds = BoxBounds(State{{0.0, -kMaxSpeed}}, State{{kTwoPi, kMaxSpeed}});
  s.angular_axes = {true, false};
  s.derivative = [](const State& x, const Control& u) {
    return State{{x(1), -kGravity * std::sin(x(0)) + u(0)}};
  };
  s.incremental_cost = [](const State&, const Control&) { return 1.0; };
  s.terminal_cost = [](const State&) { return 0.0; };
  s.sample_control = [](const State&, Rng& rng) {
    const int k = std::uniform_int_distribution<int>(-1, 1)(rng);
    return ControlSample{Control::Constant(1, k * kTorque), uniform(rng, 0.0, kMaxDuration)};
  };
  s.feasible = [](const State& x) { return std::abs(x(1)) <= kMaxSpeed; };
  s.in_goal = [](const State& x) {
    return angular_difference(x(0), kPi) <= kGoalAngle && std::abs(x(1)) < kGoalSpeed;
  };
  s.goal_box = BoxBounds(State{{kPi - kGoalAngle, -kGoalSpeed}}, State{{kPi + kGoalAngle, kGoalSpeed}});
  s.start = State{{0.0, 0.0}};
  s.mode = IntegrationMode::Numeric;
  s.dt = kDt;
  s.metric = Metric::weighted(Eigen::Vector2d(1.0, 1.0), {0});
  s.cost_scale_hint = 10.0;
  return s;
}

double flappy_arc_length(double vy0, double accel, double t) {
  const double vx = flappy::kSpeedX;
  auto prim = [vx](double s) { return 0.5 * (s * std::hypot(vx, s) + vx * vx * std::asinh(s / vx)); };
  if (t <= 0.0) return 0.0;
  if (accel == 0.0) return std::hypot(vx, vy0) * t;
  return (prim(vy0 + accel * t) - prim(vy0)) / accel;
}

double flappy_low_arc_length(double y0, double vy0, double accel, double t) {
  if (t <= 0.0) return 0.0;
  // Crossings of y = 300 inside (0, t): roots of a/2 s^2 + vy0 s + (y0 - 300).
  std::vector<double> cuts{0.0};
  const double c = y0 - flappy::kLowAltitude;
  const double a = 0.5 * accel;
  if (a == 0.0) {
    if (vy0 != 0.0) cuts.push_back(-c / vy0);
  } else {
    const double disc = vy0 * vy0 - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Numerically stable pair of roots.
      const double q = -0.5 * (vy0 + std::copysign(sq, vy0));
      if (q != 0.0) {
        cuts.push_back(q / a);
        cuts.push_back(c / q);
      } else {
        cuts.push_back(0.0);
      }
    }
  }
  cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = std::clamp(cuts[i], 0.0, t);
    const double t1 = std::clamp(cuts[i + 1], 0.0, t);
    if (!(t1 > t0)) continue;
    const double tm = 0.5 * (t0 + t1);
    const double ym = y0 + vy0 * tm + a * tm * tm;
    if (ym < flappy::kLowAltitude) {
      total += flappy_arc_length(vy0 + accel * t0, accel, t1 - t0);
    }
  }
  return total;
}

ControlSystem make_flappy(FlappyCost cost, const RectObstacleWorld& world) {
  using namespace flappy;
  world.validate();
  if (!world.goal_rect) throw std::invalid_argument("flappy needs a rectangular goal");
  const double goal_x = world.goal_rect->x;
  auto w = std::make_shared<const RectObstacleWorld>(world);
  const bool low = cost == FlappyCost::LowAltitude;
  auto accel_of = [](const Control& u) { return -kGravity + kThrust * u(0); };

  ControlSystem s;
  s.name = low ? "flappy_low" : "flappy";
  s.dim_state = 3;
  s.dim_control = 1;
  s.state_bounds = BoxBounds(State{{world.domain_lo.x(), world.domain_lo.y(), -kMaxVy}},
                             State{{world.domain_hi.x(), world.domain_hi.y(), kMaxVy}});
  s.angular_axes = {false, false, false};
  s.derivative = [accel_of](const State& x, const Control& u) { return State{{kSpeedX, x(2), accel_of(u)}}; };
  s.incremental_cost = [low](const State& x, const Control&) {
    if (low && !(x(1) < kLowAltitude)) return 0.0;
    return std::hypot(kSpeedX, x(2));
  };
  s.terminal_cost = [](const State&) { return 0.0; };
  s.sample_control = [](const State&, Rng& rng) {
    const double u = uniform01(rng) < 0.5 ? 0.0 : 1.0;
    return ControlSample{Control::Constant(1, u), uniform(rng, 0.0, kMaxDuration)};
  };
  s.feasible = [w](const State& x) { return std::abs(x(2)) <= kMaxVy && w->point_free(xy(x)); };
  s.segment_feasible = [w](const State& a, const State& b) { return w->segment_free(xy(a), xy(b)); };
  s.in_goal = [w](const State& x) { return w->in_goal(xy(x)); };
  const Rect g = *world.goal_rect;
  s.goal_box = BoxBounds(State{{g.x, g.y, -kMaxVy}}, State{{g.x1(), g.y1(), kMaxVy}});
  if (!low) {
    s.heuristic = [goal_x](const State& x) { return std::max(0.0, goal_x - x(0)); };
  }
  s.start = State{{world.start.x(), world.start.y(), 0.0}};
  s.mode = IntegrationMode::ClosedForm;
  s.dt = kCheckDt;
  s.flow = [accel_of](const State& x, const Control& u, double t) {
    const double a = accel_of(u);
    return State{{x(0) + kSpeedX * t, x(1) + x(2) * t + 0.5 * a * t * t, x(2) + a * t}};
  };
  s.flow_cost = [low, accel_of](const State& x, const Control& u, double t) {
    const double a = accel_of(u);
    return low ? flappy_low_arc_length(x(1), x(2), a, t) : flappy_arc_length(x(2), a, t);
  };
  s.metric = Metric::euclidean(3);
  s.cost_scale_hint = 1000.0;
  return s;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"kink",     "bugtrap", "dubins", "double_integrator",
                                              "pendulum", "flappy",  "flappy_low"};
  return names;
}

std::shared_ptr<const ControlSystem> make_problem(const std::string& name, const std::string& fixtures_dir) {
  auto world = [&](const std::string& file, RectObstacleWorld (*builtin)()) {
    return fixtures_dir.empty() ? builtin() : load_world(fixtures_dir + "/" + file + ".txt");
  };
  if (name == "kink") return std::make_shared<const ControlSystem>(make_kink(world("kink", kink_world)));
  if (name == "bugtrap") return std::make_shared<const ControlSystem>(make_bugtrap(world("bugtrap", bugtrap_world)));
  if (name == "dubins") return std::make_shared<const ControlSystem>(make_dubins());
  if (name == "double_integrator") return std::make_shared<const ControlSystem>(make_double_integrator());
  if (name == "pendulum") return std::make_shared<const ControlSystem>(make_pendulum());
  if (name == "flappy") {
    return std::make_shared<const ControlSystem>(make_flappy(FlappyCost::Length, world("flappy", flappy_world)));
  }
  if (name == "flappy_low") {
    return std::make_shared<const ControlSystem>(make_flappy(FlappyCost::LowAltitude, world("flappy", flappy_world)));
  }
  throw std::invalid_argument("unknown problem '" + name + "'");
}

}  // namespace aoplan
