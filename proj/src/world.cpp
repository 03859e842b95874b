#include "aoplan/world.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace aoplan {

bool Rect::contains_open(const Eigen::Vector2d& p) const {
  return p.x() > x && p.x() < x1() && p.y() > y && p.y() < y1();
}

bool Rect::contains_closed(const Eigen::Vector2d& p) const {
  return p.x() >= x && p.x() <= x1() && p.y() >= y && p.y() <= y1();
}

bool Rect::intersects_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const {
  // Clip the parameter range [0, 1] against the open slabs of each axis.
  double lo = 0.0;
  double hi = 1.0;
  const double mins[2] = {x, y};
  const double maxs[2] = {x1(), y1()};
  for (int i = 0; i < 2; ++i) {
    const double d = b(i) - a(i);
    if (d == 0.0) {
      if (!(a(i) > mins[i] && a(i) < maxs[i])) return false;
      continue;
    }
    double t0 = (mins[i] - a(i)) / d;
    double t1 = (maxs[i] - a(i)) / d;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (!(lo < hi)) return false;
  }
  return lo < hi;
}

bool RectObstacleWorld::in_domain(const Eigen::Vector2d& p) const {
  return (p.array() >= domain_lo.array()).all() && (p.array() <= domain_hi.array()).all();
}

bool RectObstacleWorld::point_free(const Eigen::Vector2d& p) const {
  if (!in_domain(p)) return false;
  return std::none_of(obstacles.begin(), obstacles.end(), [&](const Rect& r) { return r.contains_open(p); });
}

bool RectObstacleWorld::segment_free(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const {
  if (!in_domain(a) || !in_domain(b)) return false;
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Rect& r) { return r.intersects_segment(a, b); });
}

bool RectObstacleWorld::in_goal(const Eigen::Vector2d& p) const {
  if (goal_disc) return (p - goal_disc->center).norm() <= goal_disc->tolerance;
  if (goal_rect) return goal_rect->contains_closed(p);
  return false;
}

void RectObstacleWorld::validate() const {
  if (!(domain_hi.array() > domain_lo.array()).all()) throw std::invalid_argument("world: empty domain");
  if (!point_free(start)) throw std::invalid_argument("world '" + name + "': start is not free");
  if (goal_disc.has_value() == goal_rect.has_value()) {
    throw std::invalid_argument("world '" + name + "': exactly one goal form is required");
  }
  if (goal_disc) {
    if (!(goal_disc->tolerance > 0.0)) throw std::invalid_argument("world: goal tolerance must be positive");
    if (!point_free(goal_disc->center)) throw std::invalid_argument("world '" + name + "': goal is not free");
  }
  if (in_goal(start)) throw std::invalid_argument("world '" + name + "': start lies in the goal");
}

bool RectObstacleWorld::same_geometry(const RectObstacleWorld& o) const {
  return name == o.name && domain_lo == o.domain_lo && domain_hi == o.domain_hi && start == o.start &&
         goal_disc == o.goal_disc && goal_rect == o.goal_rect && obstacles == o.obstacles;
}

namespace {

std::vector<double> parse_numbers(std::istringstream& ss, std::size_t expected, int line_no) {
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) {
    double d = 0.0;
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, d);
    if (ec != std::errc() || ptr != end) {
      throw FixtureError("fixture line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
    v.push_back(d);
  }
  if (v.size() != expected) {
    throw FixtureError("fixture line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                       " numbers, got " + std::to_string(v.size()));
  }
  return v;
}

std::string fmt(double d) {
  if (std::isnan(d)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

RectObstacleWorld parse_world(std::istream& in) {
  RectObstacleWorld w;
  bool have_version = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head)) continue;
    if (head == "version") {
      const auto v = parse_numbers(ss, 1, line_no);
      if (v[0] != RectObstacleWorld::kFormatVersion) {
        throw FixtureError("unsupported fixture version " + fmt(v[0]));
      }
      have_version = true;
    } else if (head == "name") {
      if (!(ss >> w.name)) throw FixtureError("fixture line " + std::to_string(line_no) + ": missing name");
    } else if (head == "domain") {
      const auto v = parse_numbers(ss, 4, line_no);
      w.domain_lo = {v[0], v[1]};
      w.domain_hi = {v[2], v[3]};
    } else if (head == "start") {
      const auto v = parse_numbers(ss, 2, line_no);
      w.start = {v[0], v[1]};
    } else if (head == "goal") {
      const auto v = parse_numbers(ss, 3, line_no);
      w.goal_disc = GoalDisc{{v[0], v[1]}, v[2]};
    } else if (head == "goal_rect") {
      const auto v = parse_numbers(ss, 4, line_no);
      w.goal_rect = Rect{v[0], v[1], v[2], v[3]};
    } else if (head == "oracle_optimum") {
      std::string tok;
      ss >> tok;
      if (tok == "nan") {
        w.oracle_optimum = std::numeric_limits<double>::quiet_NaN();
      } else {
        std::istringstream again(tok);
        w.oracle_optimum = parse_numbers(again, 1, line_no)[0];
      }
    } else {
      std::istringstream all(line);
      const auto v = parse_numbers(all, 4, line_no);
      if (!(v[2] > 0.0 && v[3] > 0.0)) {
        throw FixtureError("fixture line " + std::to_string(line_no) + ": rectangle needs positive size");
      }
      w.obstacles.push_back(Rect{v[0], v[1], v[2], v[3]});
    }
  }
  if (!have_version) throw FixtureError("fixture has no version line");
  if (w.name.empty()) throw FixtureError("fixture has no name");
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw FixtureError(e.what());
  }
  return w;
}

RectObstacleWorld load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture '" + path + "'");
  return parse_world(in);
}

void write_world(std::ostream& out, const RectObstacleWorld& w) {
  out << "version " << RectObstacleWorld::kFormatVersion << '\n';
  out << "name " << w.name << '\n';
  out << "domain " << fmt(w.domain_lo.x()) << ' ' << fmt(w.domain_lo.y()) << ' ' << fmt(w.domain_hi.x()) << ' '
      << fmt(w.domain_hi.y()) << '\n';
  out << "start " << fmt(w.start.x()) << ' ' << fmt(w.start.y()) << '\n';
  if (w.goal_disc) {
    out << "goal " << fmt(w.goal_disc->center.x()) << ' ' << fmt(w.goal_disc->center.y()) << ' '
        << fmt(w.goal_disc->tolerance) << '\n';
  }
  if (w.goal_rect) {
    const Rect& g = *w.goal_rect;
    out << "goal_rect " << fmt(g.x) << ' ' << fmt(g.y) << ' ' << fmt(g.w) << ' ' << fmt(g.h) << '\n';
  }
  out << "oracle_optimum " << fmt(w.oracle_optimum) << '\n';
  for (const Rect& r : w.obstacles) {
    out << fmt(r.x) << ' ' << fmt(r.y) << ' ' << fmt(r.w) << ' ' << fmt(r.h) << '\n';
  }
}

RectObstacleWorld kink_world() {
  RectObstacleWorld w;
  w.name = "kink";
  w.start = {0.1, 0.1};
  w.goal_disc = GoalDisc{{0.9, 0.9}, 0.05};
  // A wall x in [0.4, 0.6] open above y = 0.9, cut by a Z-shaped corridor of
  // width 0.02: (0.40..0.51, 0.44..0.46), (0.49..0.51, 0.44..0.56), (0.49..0.60, 0.54..0.56).
  // Pieces overlap rather than share edges, so no zero-width slit is free.
  w.obstacles = {
      Rect{0.40, -0.01, 0.20, 0.45},
      Rect{0.40, 0.46, 0.09, 0.44},
      Rect{0.51, 0.43, 0.09, 0.11},
      Rect{0.48, 0.56, 0.12, 0.34},
  };
  return w;
}

RectObstacleWorld bugtrap_world() {
  RectObstacleWorld w;
  w.name = "bugtrap";
  w.start = {0.5, 0.5};
  w.goal_disc = GoalDisc{{0.1, 0.5}, 0.03};
  // C-shaped trap opening to the right through a mouth at y in [0.45, 0.55].
  w.obstacles = {
      Rect{0.30, 0.30, 0.05, 0.40},
      Rect{0.30, 0.65, 0.40, 0.05},
      Rect{0.30, 0.30, 0.40, 0.05},
      Rect{0.65, 0.30, 0.05, 0.15},
      Rect{0.65, 0.55, 0.05, 0.15},
  };
  return w;
}

RectObstacleWorld flappy_world() {
  RectObstacleWorld w;
  w.name = "flappy";
  w.domain_hi = {1000.0, 600.0};
  w.start = {20.0, 250.0};
  w.goal_rect = Rect{960.0, 0.0, 40.0, 600.0};
  // Three walls of width 40, each with a lower opening y in [120, 220] and an
  // upper opening y in [380, 480]. Wall ends overhang the domain edges.
  for (double x : {250.0, 500.0, 750.0}) {
    w.obstacles.push_back(Rect{x, -10.0, 40.0, 130.0});
    w.obstacles.push_back(Rect{x, 220.0, 40.0, 160.0});
    w.obstacles.push_back(Rect{x, 480.0, 40.0, 130.0});
  }
  return w;
}

}  // namespace aoplan
