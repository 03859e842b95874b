#pragma once

#include "aoplan/dynamics.hpp"
#include "aoplan/world.hpp"

#include <memory>
#include <string>
#include <vector>

namespace aoplan {

namespace kinematic {
inline constexpr double kMaxExpansion = 0.15;
}

namespace dubins {
/// Steering is clamped so that |tan(phi)| <= 5: minimum turning radius 0.2.
inline constexpr double kMaxTanSteer = 5.0;
inline constexpr double kMaxDuration = 0.25;
inline constexpr double kGoalTolerance = 0.1;
}  // namespace dubins

namespace double_integrator {
inline constexpr double kMaxAccel = 5.0;
inline constexpr double kMaxSpeed = 1.0;
inline constexpr double kMaxDuration = 0.05;
inline constexpr double kGoalTolerance = 0.2;
}  // namespace double_integrator

namespace pendulum {
inline constexpr double kGravity = 9.8;
inline constexpr double kTorque = 2.0;
inline constexpr double kMaxDuration = 0.5;
inline constexpr double kDt = 0.01;
inline constexpr double kGoalAngle = 10.0 * kPi / 180.0;
inline constexpr double kGoalSpeed = 0.5;
inline constexpr double kMaxSpeed = 10.0;
}  // namespace pendulum

namespace flappy {
inline constexpr double kSpeedX = 5.0;
inline constexpr double kGravity = 1.0;
inline constexpr double kThrust = 4.0;
inline constexpr double kMaxDuration = 1.0;
inline constexpr double kCheckDt = 0.1;
inline constexpr double kMaxVy = 40.0;
inline constexpr double kLowAltitude = 300.0;
}  // namespace flappy

/// Point robot with unit-speed straight segments of length in (0, 0.15] and
/// path-length cost, in a rectangle world with a disc goal.
ControlSystem make_kinematic(const RectObstacleWorld& world);
ControlSystem make_kink(const RectObstacleWorld& world = kink_world());
ControlSystem make_bugtrap(const RectObstacleWorld& world = bugtrap_world());

/// Car (x, y, theta) with control (v, phi): x' = v cos(theta), y' = v sin(theta),
/// theta' = v tan(phi) with |tan(phi)| clamped to 5. Minimum-time cost.
ControlSystem make_dubins();

/// q' = v, v' = u over q in [0,1]^2, v in [-1,1]^2, u in [-5,5]^2. Minimum time.
ControlSystem make_double_integrator();

/// theta'' = -9.8 sin(theta) + tau, tau in {-2, 0, 2}. Minimum time to within
/// 10 degrees of inverted with |omega| < 0.5.
ControlSystem make_pendulum();

enum class FlappyCost { Length, LowAltitude };

/// (x, y, vy) with x' = 5, y' = vy, vy' = -1 + 4u, u in {0, 1}. The cost is
/// arc length, or arc length accrued only below y = 300.
ControlSystem make_flappy(FlappyCost cost, const RectObstacleWorld& world = flappy_world());

/// Arc length of a flappy segment held for time t (closed form).
double flappy_arc_length(double vy0, double accel, double t);
/// Arc length of the part of the segment with y < 300.
double flappy_low_arc_length(double y0, double vy0, double accel, double t);

/// Names accepted by `make_problem`.
const std::vector<std::string>& problem_names();

/// Builds a problem by name. Obstacle worlds are read from
/// `<fixtures_dir>/<world>.txt` when `fixtures_dir` is non-empty (FixtureError
/// if missing), otherwise the built-in geometry is used.
std::shared_ptr<const ControlSystem> make_problem(const std::string& name, const std::string& fixtures_dir = "");

}  // namespace aoplan
