#include "aoplan/core_space.hpp"

#include <algorithm>

namespace aoplan {

BoxBounds::BoxBounds(State lo_, State hi_, bool allow_infinite_last)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) {
    throw DimensionError("box bounds: lo and hi differ in size");
  }
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    if (std::isnan(lo(i)) || std::isnan(hi(i)) || lo(i) > hi(i)) {
      throw std::invalid_argument("box bounds: axis " + std::to_string(i) + " has lo > hi or NaN");
    }
    const bool infinite = !std::isfinite(lo(i)) || !std::isfinite(hi(i));
    if (infinite && !(allow_infinite_last && i == n - 1)) {
      throw std::invalid_argument("box bounds: axis " + std::to_string(i) + " is unbounded");
    }
  }
}

bool BoxBounds::contains(const Eigen::Ref<const State>& x) const {
  if (x.size() != lo.size()) throw DimensionError("box bounds: dimension mismatch");
  return ((x.array() >= lo.array()) && (x.array() <= hi.array())).all();
}

BoxBounds BoxBounds::with_axis(double lo_v, double hi_v, bool allow_infinite) const {
  State l(lo.size() + 1), h(hi.size() + 1);
  l << lo, lo_v;
  h << hi, hi_v;
  return BoxBounds(std::move(l), std::move(h), allow_infinite);
}

Metric Metric::euclidean(int dim) {
  Metric m;
  m.kind = MetricKind::Euclidean;
  m.weights = Eigen::VectorXd::Ones(dim);
  m.angular.assign(static_cast<std::size_t>(dim), false);
  return m;
}

Metric Metric::weighted(Eigen::VectorXd weights, const std::vector<int>& angular_axes) {
  if ((weights.array() < 0.0).any() || !weights.allFinite()) {
    throw std::invalid_argument("metric weights must be finite and non-negative");
  }
  Metric m;
  m.kind = MetricKind::WeightedWithAngles;
  m.angular.assign(static_cast<std::size_t>(weights.size()), false);
  for (int a : angular_axes) {
    if (a < 0 || a >= weights.size()) throw DimensionError("angular axis out of range");
    m.angular[static_cast<std::size_t>(a)] = true;
  }
  m.weights = std::move(weights);
  return m;
}

bool Metric::has_angular_axes() const {
  return std::any_of(angular.begin(), angular.end(), [](bool b) { return b; });
}

Metric Metric::with_cost_axis(double cost_weight) const {
  Eigen::VectorXd w(weights.size() + 1);
  w << weights, cost_weight;
  std::vector<int> axes;
  for (int i = 0; i < dim(); ++i) {
    if (is_angular(i)) axes.push_back(i);
  }
  return weighted(std::move(w), axes);
}

State sample_uniform(const BoxBounds& b, Rng& rng) {
  if (!b.is_finite()) {
    throw std::invalid_argument("sample_uniform: bounds must be finite (clip the cost axis first)");
  }
  State x(b.dim());
  for (int i = 0; i < b.dim(); ++i) {
    if (b.lo(i) == b.hi(i)) {
      x(i) = b.lo(i);
    } else {
      x(i) = std::uniform_real_distribution<double>(b.lo(i), b.hi(i))(rng);
    }
  }
  return x;
}

State scale_to_unit(const Eigen::Ref<const State>& x, const BoxBounds& b) {
  if (x.size() != b.dim()) throw DimensionError("scale_to_unit: dimension mismatch");
  if (!b.is_finite()) throw std::invalid_argument("scale_to_unit: bounds must be finite");
  State u(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double width = b.hi(i) - b.lo(i);
    u(i) = width > 0.0 ? (x(i) - b.lo(i)) / width : 0.5;
  }
  return u;
}

State unscale_from_unit(const Eigen::Ref<const State>& u, const BoxBounds& b) {
  if (u.size() != b.dim()) throw DimensionError("unscale_from_unit: dimension mismatch");
  State x(u.size());
  for (int i = 0; i < u.size(); ++i) {
    const double width = b.hi(i) - b.lo(i);
    x(i) = width > 0.0 ? b.lo(i) + u(i) * width : b.lo(i);
  }
  return x;
}

}  // namespace aoplan
