#include "aoplan/nn_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace aoplan {

KdTree::KdTree(Metric metric, int leaf_size) : metric_(std::move(metric)), leaf_size_(leaf_size) {
  if (leaf_size_ < 1) throw std::invalid_argument("kd tree: leaf size must be positive");
}

void KdTree::clear() {
  raw_.clear();
  keys_.clear();
  ids_.clear();
  alive_.clear();
  slot_of_.clear();
  nodes_.clear();
  alive_count_ = 0;
}

void KdTree::insert(int id, const Eigen::Ref<const State>& p) {
  const int d = dim();
  if (p.size() != d) throw DimensionError("kd tree: point dimension mismatch");
  if (id < 0) throw std::invalid_argument("kd tree: ids must be non-negative");
  if (static_cast<std::size_t>(id) >= slot_of_.size()) slot_of_.resize(static_cast<std::size_t>(id) + 1, -1);
  if (slot_of_[static_cast<std::size_t>(id)] >= 0) throw std::invalid_argument("kd tree: duplicate id");

  const int slot = static_cast<int>(ids_.size());
  for (int i = 0; i < d; ++i) {
    raw_.push_back(p(i));
    keys_.push_back(metric_.is_angular(i) ? wrap_angle(p(i)) : p(i));
  }
  ids_.push_back(id);
  alive_.push_back(1);
  slot_of_[static_cast<std::size_t>(id)] = slot;
  ++alive_count_;

  if (nodes_.empty()) nodes_.emplace_back();
  int node = 0;
  const double* k = key(slot);
  while (nodes_[static_cast<std::size_t>(node)].axis >= 0) {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    node = n.child[k[n.axis] < n.split ? 0 : 1];
  }
  nodes_[static_cast<std::size_t>(node)].bucket.push_back(slot);
  if (static_cast<int>(nodes_[static_cast<std::size_t>(node)].bucket.size()) > leaf_size_) split_leaf(node);
}

namespace {

// Axis with the largest metric-weighted spread over `slots`, or -1.
int widest_axis(const Metric& m, const std::vector<double>& keys, int d, const int* first, const int* last,
                double& lo_out, double& hi_out) {
  int best = -1;
  double best_spread = 0.0;
  for (int a = 0; a < d; ++a) {
    if (!(m.weights(a) > 0.0)) continue;
    double lo = kInf, hi = -kInf;
    for (const int* s = first; s != last; ++s) {
      const double v = keys[static_cast<std::size_t>(*s) * d + a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double spread = (hi - lo) * std::sqrt(m.weights(a));
    if (spread > best_spread) {
      best_spread = spread;
      best = a;
      lo_out = lo;
      hi_out = hi;
    }
  }
  return best;
}

}  // namespace

void KdTree::split_leaf(int node) {
  const int d = dim();
  std::vector<int> bucket = std::move(nodes_[static_cast<std::size_t>(node)].bucket);
  double lo = 0.0, hi = 0.0;
  const int axis = widest_axis(metric_, keys_, d, bucket.data(), bucket.data() + bucket.size(), lo, hi);
  if (axis < 0) {
    nodes_[static_cast<std::size_t>(node)].bucket = std::move(bucket);
    return;
  }
  auto value = [&](int s) { return keys_[static_cast<std::size_t>(s) * d + axis]; };
  const std::size_t mid = bucket.size() / 2;
  std::nth_element(bucket.begin(), bucket.begin() + static_cast<std::ptrdiff_t>(mid), bucket.end(),
                   [&](int a, int b) { return value(a) < value(b); });
  double split = value(bucket[mid]);
  if (!(split > lo)) split = lo + 0.5 * (hi - lo);
  if (!(split > lo)) {
    nodes_[static_cast<std::size_t>(node)].bucket = std::move(bucket);
    return;
  }
  Node left, right;
  for (int s : bucket) (value(s) < split ? left : right).bucket.push_back(s);
  const int li = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(left));
  nodes_.push_back(std::move(right));
  Node& n = nodes_[static_cast<std::size_t>(node)];
  n.axis = axis;
  n.split = split;
  n.child[0] = li;
  n.child[1] = li + 1;
}

bool KdTree::remove(int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= slot_of_.size()) return false;
  const int slot = slot_of_[static_cast<std::size_t>(id)];
  if (slot < 0) return false;
  alive_[static_cast<std::size_t>(slot)] = 0;
  slot_of_[static_cast<std::size_t>(id)] = -1;
  --alive_count_;
  if (ids_.size() - alive_count_ > alive_count_) rebuild();
  return true;
}

int KdTree::build(std::vector<int>& slots, std::size_t begin, std::size_t end) {
  const int d = dim();
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  double lo = 0.0, hi = 0.0;
  const int axis = static_cast<int>(end - begin) > leaf_size_
                       ? widest_axis(metric_, keys_, d, slots.data() + begin, slots.data() + end, lo, hi)
                       : -1;
  if (axis < 0) {
    nodes_[static_cast<std::size_t>(index)].bucket.assign(slots.begin() + static_cast<std::ptrdiff_t>(begin),
                                                         slots.begin() + static_cast<std::ptrdiff_t>(end));
    return index;
  }
  auto value = [&](int s) { return keys_[static_cast<std::size_t>(s) * d + axis]; };
  const auto first = slots.begin() + static_cast<std::ptrdiff_t>(begin);
  const auto last = slots.begin() + static_cast<std::ptrdiff_t>(end);
  // Partition strictly by "< split" so insertion descent and build agree.
  std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(first, slots.begin() + static_cast<std::ptrdiff_t>(mid), last,
                   [&](int a, int b) { return value(a) < value(b); });
  double split = value(slots[mid]);
  if (!(split > lo)) split = lo + 0.5 * (hi - lo);
  const auto pivot = std::partition(first, last, [&](int s) { return value(s) < split; });
  mid = static_cast<std::size_t>(pivot - slots.begin());
  if (mid == begin || mid == end) {
    nodes_[static_cast<std::size_t>(index)].bucket.assign(first, last);
    return index;
  }
  const int l = build(slots, begin, mid);
  const int r = build(slots, mid, end);
  Node& n = nodes_[static_cast<std::size_t>(index)];
  n.axis = axis;
  n.split = split;
  n.child[0] = l;
  n.child[1] = r;
  return index;
}

void KdTree::rebuild() {
  const int d = dim();
  std::vector<double> raw, keys;
  std::vector<int> ids;
  raw.reserve(alive_count_ * static_cast<std::size_t>(d));
  keys.reserve(alive_count_ * static_cast<std::size_t>(d));
  ids.reserve(alive_count_);
  for (std::size_t s = 0; s < ids_.size(); ++s) {
    if (!alive_[s]) continue;
    raw.insert(raw.end(), raw_.begin() + static_cast<std::ptrdiff_t>(s * d),
               raw_.begin() + static_cast<std::ptrdiff_t>((s + 1) * d));
    keys.insert(keys.end(), keys_.begin() + static_cast<std::ptrdiff_t>(s * d),
                keys_.begin() + static_cast<std::ptrdiff_t>((s + 1) * d));
    ids.push_back(ids_[s]);
  }
  raw_ = std::move(raw);
  keys_ = std::move(keys);
  ids_ = std::move(ids);
  alive_.assign(ids_.size(), 1);
  std::fill(slot_of_.begin(), slot_of_.end(), -1);
  for (std::size_t s = 0; s < ids_.size(); ++s) slot_of_[static_cast<std::size_t>(ids_[s])] = static_cast<int>(s);
  nodes_.clear();
  if (ids_.empty()) return;
  std::vector<int> slots(ids_.size());
  for (std::size_t s = 0; s < slots.size(); ++s) slots[s] = static_cast<int>(s);
  build(slots, 0, slots.size());
}

double KdTree::box_lower_bound(const std::vector<double>& q, const std::vector<double>& lo,
                               const std::vector<double>& hi) const {
  double sum = 0.0;
  for (int a = 0; a < dim(); ++a) {
    const double w = metric_.weights(a);
    if (!(w > 0.0)) continue;
    const std::size_t i = static_cast<std::size_t>(a);
    double delta = 0.0;
    if (q[i] < lo[i] || q[i] > hi[i]) {
      if (metric_.is_angular(a)) {
        auto circ = [](double x, double y) {
          const double dd = std::abs(x - y);
          return std::min(dd, kTwoPi - dd);
        };
        delta = std::min(circ(q[i], lo[i]), circ(q[i], hi[i]));
      } else {
        delta = q[i] < lo[i] ? lo[i] - q[i] : q[i] - hi[i];
      }
    }
    sum += w * delta * delta;
  }
  return sum;
}

void KdTree::search(int node, const State& q_raw, const std::vector<double>& q_key, std::vector<double>& lo,
                    std::vector<double>& hi, int& best_slot, double& best_d2) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const int d = dim();
  if (n.axis < 0) {
    for (int s : n.bucket) {
      if (!alive_[static_cast<std::size_t>(s)]) continue;
      const double d2 = squared_distance(metric_, Eigen::Map<const State>(raw(s), d), q_raw);
      if (d2 < best_d2) {
        best_d2 = d2;
        best_slot = s;
      }
    }
    return;
  }
  const std::size_t a = static_cast<std::size_t>(n.axis);
  const int near = q_key[a] < n.split ? 0 : 1;
  for (int pass = 0; pass < 2; ++pass) {
    const int c = pass == 0 ? near : 1 - near;
    const double saved = c == 0 ? hi[a] : lo[a];
    if (c == 0) {
      hi[a] = std::min(hi[a], n.split);
    } else {
      lo[a] = std::max(lo[a], n.split);
    }
    // Small relative slack keeps the pruning conservative under rounding.
    if (box_lower_bound(q_key, lo, hi) <= best_d2 * (1.0 + 1e-9)) {
      search(n.child[c], q_raw, q_key, lo, hi, best_slot, best_d2);
    }
    if (c == 0) {
      hi[a] = saved;
    } else {
      lo[a] = saved;
    }
  }
}

int KdTree::nearest(const Eigen::Ref<const State>& q) const {
  if (alive_count_ == 0) throw std::logic_error("kd tree: nearest() on an empty index");
  const int d = dim();
  if (q.size() != d) throw DimensionError("kd tree: query dimension mismatch");
  const State q_raw = q;
  std::vector<double> q_key(static_cast<std::size_t>(d)), lo(static_cast<std::size_t>(d)),
      hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const std::size_t i = static_cast<std::size_t>(a);
    if (metric_.is_angular(a)) {
      q_key[i] = wrap_angle(q(a));
      lo[i] = 0.0;
      hi[i] = kTwoPi;
    } else {
      q_key[i] = q(a);
      lo[i] = -kInf;
      hi[i] = kInf;
    }
  }
  int best_slot = -1;
  double best_d2 = kInf;
  search(0, q_raw, q_key, lo, hi, best_slot, best_d2);
  return ids_[static_cast<std::size_t>(best_slot)];
}

}  // namespace aoplan
