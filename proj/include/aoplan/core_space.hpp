#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoplan {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using State = VectorX<double>;
using Control = VectorX<double>;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wraps an angle into [0, 2pi).
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  Scalar r = std::fmod(a, Scalar(kTwoPi));
  if (r < Scalar(0)) r += Scalar(kTwoPi);
  if (r >= Scalar(kTwoPi)) r = Scalar(0);
  return r;
}

/// Shortest absolute difference between two angles, in [0, pi].
template <typename Scalar>
Scalar angular_difference(Scalar a, Scalar b) {
  const Scalar d = wrap_angle(a - b);
  return std::min(d, Scalar(kTwoPi) - d);
}

/// Axis-aligned box. Infinite bounds are only legal on an axis flagged as a
/// cost axis (see `allow_infinite_last`).
struct BoxBounds {
  State lo;
  State hi;

  BoxBounds() = default;
  BoxBounds(State lo_, State hi_, bool allow_infinite_last = false);

  int dim() const { return static_cast<int>(lo.size()); }
  bool is_finite() const { return lo.allFinite() && hi.allFinite(); }
  bool contains(const Eigen::Ref<const State>& x) const;
  BoxBounds with_axis(double lo_v, double hi_v, bool allow_infinite) const;
};

enum class MetricKind { Euclidean, WeightedWithAngles };

/// Distance function as data: d(a,b) = sqrt(sum_i w_i * delta_i^2) where
/// delta_i is the shortest angular difference on angular axes and the plain
/// difference elsewhere. Dubins-style "d_theta^2 / (2 pi)" terms are expressed
/// as a weight of 1/(2 pi) on the angular axis.
struct Metric {
  MetricKind kind = MetricKind::Euclidean;
  Eigen::VectorXd weights;
  std::vector<bool> angular;

  static Metric euclidean(int dim);
  static Metric weighted(Eigen::VectorXd weights, const std::vector<int>& angular_axes = {});

  int dim() const { return static_cast<int>(weights.size()); }
  bool is_angular(int axis) const { return angular[static_cast<std::size_t>(axis)]; }
  bool has_angular_axes() const;

  /// Same metric over one extra trailing axis (the cost axis) with weight w_c.
  Metric with_cost_axis(double cost_weight) const;
};

template <typename DA, typename DB>
double squared_distance(const Metric& m, const Eigen::MatrixBase<DA>& a,
                        const Eigen::MatrixBase<DB>& b) {
  const int n = m.dim();
  if (a.size() != n || b.size() != n) {
    throw DimensionError("metric dimension " + std::to_string(n) + " does not match states of size " +
                         std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double sum = 0.0;
  if (m.kind == MetricKind::Euclidean) {
    for (int i = 0; i < n; ++i) {
      const double d = double(a(i)) - double(b(i));
      sum += d * d;
    }
    return sum;
  }
  for (int i = 0; i < n; ++i) {
    const double d = m.is_angular(i) ? angular_difference(double(a(i)), double(b(i)))
                                     : double(a(i)) - double(b(i));
    sum += m.weights(i) * (d * d);
  }
  return sum;
}

template <typename DA, typename DB>
double distance(const Metric& m, const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return std::sqrt(squared_distance(m, a, b));
}

/// I.i.d. uniform coordinates in [lo, hi]. Throws on infinite bounds.
State sample_uniform(const BoxBounds& b, Rng& rng);

/// Affine map of each coordinate onto [0,1]; zero-width axes map to 0.5.
State scale_to_unit(const Eigen::Ref<const State>& x, const BoxBounds& b);
State unscale_from_unit(const Eigen::Ref<const State>& u, const BoxBounds& b);

/// Uniform real in [0,1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace aoplan
