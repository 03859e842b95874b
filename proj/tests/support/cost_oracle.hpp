#pragma once

// Independent evaluation of the running cost integral of a base trajectory:
// adaptive Simpson quadrature of L along each segment's state path, with the
// path written out per problem rather than taken from the library.

#include "aoplan/dynamics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 60);
}

// Integral of L over one held control of the named problem.
inline double segment_cost(const std::string& problem, const aoplan::State& x0, const aoplan::Control& u,
                           double t) {
  if (problem == "kink" || problem == "bugtrap") {
    return integrate([&](double) { return std::hypot(u(0), u(1)); }, 0.0, t);
  }
  if (problem == "dubins" || problem == "double_integrator" || problem == "pendulum") {
    return integrate([](double) { return 1.0; }, 0.0, t);
  }
  if (problem == "flappy" || problem == "flappy_low") {
    const double a = -1.0 + 4.0 * u(0);
    const bool low = problem == "flappy_low";
    auto f = [&](double s) {
      const double vy = x0(2) + a * s;
      const double y = x0(1) + x0(2) * s + 0.5 * a * s * s;
      if (low && !(y < 300.0)) return 0.0;
      return std::sqrt(25.0 + vy * vy);
    };
    return integrate(f, 0.0, t, 1e-12);
  }
  throw std::invalid_argument("no cost oracle for " + problem);
}

inline double running_cost(const std::string& problem, const aoplan::Trajectory& t) {
  double c = 0.0;
  for (const aoplan::Segment& s : t.segments) c += segment_cost(problem, s.from, s.u, s.duration);
  return c;
}

}  // namespace oracle
