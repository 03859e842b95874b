#pragma once

#include "aoplan/core_space.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aoplan {

/// Axis-aligned rectangle with lower-left corner (x, y). Obstacles are open
/// sets: touching an edge is allowed.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x1() const { return x + w; }
  double y1() const { return y + h; }
  bool contains_open(const Eigen::Vector2d& p) const;
  bool contains_closed(const Eigen::Vector2d& p) const;
  /// True iff the closed segment [a, b] meets the open rectangle.
  bool intersects_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;
  bool operator==(const Rect&) const = default;
};

struct GoalDisc {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double tolerance = 0.0;
  bool operator==(const GoalDisc&) const = default;
};

/// Planar world of rectangular obstacles, as stored in a fixture file.
struct RectObstacleWorld {
  static constexpr int kFormatVersion = 1;

  std::string name;
  Eigen::Vector2d domain_lo = Eigen::Vector2d::Zero();
  Eigen::Vector2d domain_hi = Eigen::Vector2d::Ones();
  Eigen::Vector2d start = Eigen::Vector2d::Zero();
  std::optional<GoalDisc> goal_disc;
  std::optional<Rect> goal_rect;
  /// Optimal cost recorded with the fixture; NaN when unknown.
  double oracle_optimum = std::numeric_limits<double>::quiet_NaN();
  std::vector<Rect> obstacles;

  bool in_domain(const Eigen::Vector2d& p) const;
  bool point_free(const Eigen::Vector2d& p) const;
  bool segment_free(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;
  bool in_goal(const Eigen::Vector2d& p) const;
  /// Throws std::invalid_argument if the start or goal overlaps an obstacle.
  void validate() const;
  /// Same geometry, start and goal; the oracle value is not compared.
  bool same_geometry(const RectObstacleWorld& o) const;
};

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixture text format, one record per line, '#' starts a comment:
///
///   version 1
///   name kink
///   domain x0 y0 x1 y1
///   start x y
///   goal x y tolerance        (or: goal_rect x y w h)
///   oracle_optimum c
///   x y w h                   (one obstacle per line)
RectObstacleWorld parse_world(std::istream& in);
RectObstacleWorld load_world(const std::string& path);
void write_world(std::ostream& out, const RectObstacleWorld& w);

/// Built-in geometries; the shipped fixture files carry the same data.
RectObstacleWorld kink_world();
RectObstacleWorld bugtrap_world();
RectObstacleWorld flappy_world();

}  // namespace aoplan
