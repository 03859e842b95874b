#pragma once

// Shortest-path oracles for planar worlds of open rectangular obstacles.
// Self-contained: the fixture reader and the segment test do not use the
// library.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct Box {
  double x0, y0, x1, y1;
};

struct PlanarScene {
  Eigen::Vector2d lo{0, 0}, hi{1, 1};
  Eigen::Vector2d start{0, 0};
  Eigen::Vector2d goal{0, 0};
  double goal_radius = 0.0;
  double optimum = std::numeric_limits<double>::quiet_NaN();
  std::vector<Box> boxes;
};

inline PlanarScene read_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PlanarScene s;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "version" || key == "name" || key == "goal_rect") continue;
    if (key == "domain") ss >> s.lo.x() >> s.lo.y() >> s.hi.x() >> s.hi.y();
    else if (key == "start") ss >> s.start.x() >> s.start.y();
    else if (key == "goal") ss >> s.goal.x() >> s.goal.y() >> s.goal_radius;
    else if (key == "oracle_optimum") ss >> s.optimum;
    else {
      std::istringstream all(line);
      double x, y, w, h;
      all >> x >> y >> w >> h;
      s.boxes.push_back(Box{x, y, x + w, y + h});
    }
  }
  return s;
}

inline bool inside_open(const Box& b, const Eigen::Vector2d& p) {
  return p.x() > b.x0 && p.x() < b.x1 && p.y() > b.y0 && p.y() < b.y1;
}

// Separating-axis test between the closed segment [a, b] and an open box:
// they are disjoint iff one of the axes x, y, or the segment normal separates
// them, touching allowed.
inline bool segment_hits(const Box& box, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (a == b) return inside_open(box, a);
  if (std::max(a.x(), b.x()) <= box.x0 || std::min(a.x(), b.x()) >= box.x1) return false;
  if (std::max(a.y(), b.y()) <= box.y0 || std::min(a.y(), b.y()) >= box.y1) return false;
  const Eigen::Vector2d n(a.y() - b.y(), b.x() - a.x());
  const double s = n.dot(a);
  const double c[4] = {n.dot(Eigen::Vector2d(box.x0, box.y0)), n.dot(Eigen::Vector2d(box.x1, box.y0)),
                       n.dot(Eigen::Vector2d(box.x0, box.y1)), n.dot(Eigen::Vector2d(box.x1, box.y1))};
  const double lo = *std::min_element(c, c + 4);
  const double hi = *std::max_element(c, c + 4);
  return s > lo && s < hi;
}

inline bool in_domain(const PlanarScene& s, const Eigen::Vector2d& p) {
  return p.x() >= s.lo.x() && p.x() <= s.hi.x() && p.y() >= s.lo.y() && p.y() <= s.hi.y();
}

inline bool free_point(const PlanarScene& s, const Eigen::Vector2d& p) {
  if (!in_domain(s, p)) return false;
  for (const Box& b : s.boxes) {
    if (inside_open(b, p)) return false;
  }
  return true;
}

inline bool free_segment(const PlanarScene& s, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (!in_domain(s, a) || !in_domain(s, b)) return false;
  for (const Box& box : s.boxes) {
    if (segment_hits(box, a, b)) return false;
  }
  return true;
}

// Exact shortest path length from the start to the goal disc. Shortest paths
// among polygonal obstacles bend only at obstacle corners, then leave the last
// vertex straight toward the disc centre.
inline double visibility_shortest(const PlanarScene& s) {
  std::vector<Eigen::Vector2d> v{s.start};
  for (const Box& b : s.boxes) {
    for (const Eigen::Vector2d& c : {Eigen::Vector2d(b.x0, b.y0), Eigen::Vector2d(b.x1, b.y0),
                                     Eigen::Vector2d(b.x0, b.y1), Eigen::Vector2d(b.x1, b.y1)}) {
      if (free_point(s, c)) v.push_back(c);
    }
  }
  const std::size_t n = v.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  dist[0] = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && std::isfinite(dist[i]) && (u == n || dist[i] < dist[u])) u = i;
    }
    if (u == n || dist[u] >= best) break;
    done[u] = 1;
    const Eigen::Vector2d to_goal = s.goal - v[u];
    const double d = to_goal.norm();
    if (d <= s.goal_radius) {
      best = std::min(best, dist[u]);
    } else {
      const Eigen::Vector2d entry = v[u] + to_goal * ((d - s.goal_radius) / d);
      if (free_segment(s, v[u], entry)) best = std::min(best, dist[u] + d - s.goal_radius);
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (done[w]) continue;
      const double nd = dist[u] + (v[w] - v[u]).norm();
      if (nd < dist[w] && free_segment(s, v[u], v[w])) dist[w] = nd;
    }
  }
  return best;
}

// Dijkstra over cell centres of an n x n grid with 8-connected moves; an edge
// is usable when the straight move is free. Start and goal snap to cells.
inline double grid_shortest(const PlanarScene& s, int n = 1000) {
  const Eigen::Vector2d size = s.hi - s.lo;
  auto centre = [&](int i, int j) {
    return Eigen::Vector2d(s.lo.x() + (i + 0.5) * size.x() / n, s.lo.y() + (j + 0.5) * size.y() / n);
  };
  std::vector<char> free_cell(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) free_cell[static_cast<std::size_t>(i) * n + j] = free_point(s, centre(i, j));
  }
  auto cell = [&](const Eigen::Vector2d& p) {
    const int i = std::clamp(static_cast<int>((p.x() - s.lo.x()) / size.x() * n), 0, n - 1);
    const int j = std::clamp(static_cast<int>((p.y() - s.lo.y()) / size.y() * n), 0, n - 1);
    return i * n + j;
  };
  std::vector<double> dist(free_cell.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int src = cell(s.start);
  dist[static_cast<std::size_t>(src)] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    const auto [d, id] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(id)]) continue;
    const int i = id / n;
    const int j = id % n;
    const Eigen::Vector2d p = centre(i, j);
    if ((p - s.goal).norm() <= s.goal_radius) return d;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const int a = i + di;
        const int b = j + dj;
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        const int nid = a * n + b;
        if (!free_cell[static_cast<std::size_t>(nid)]) continue;
        const Eigen::Vector2d q = centre(a, b);
        if (!free_segment(s, p, q)) continue;
        const double nd = d + (q - p).norm();
        if (nd < dist[static_cast<std::size_t>(nid)]) {
          dist[static_cast<std::size_t>(nid)] = nd;
          pq.push({nd, nid});
        }
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace oracle
