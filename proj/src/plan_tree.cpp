#include "aoplan/planners.hpp"

#include <algorithm>

namespace aoplan {

PlanTree::PlanTree(int dim, int control_dim) : dim_(dim), control_dim_(control_dim) {
  if (dim < 1 || control_dim < 1) throw std::invalid_argument("PlanTree: dimensions must be positive");
}

int PlanTree::add_root(const Eigen::Ref<const State>& z) {
  if (!empty()) throw std::logic_error("PlanTree: root already present");
  if (z.size() != dim_) throw DimensionError("PlanTree: root dimension mismatch");
  states_.assign(z.data(), z.data() + dim_);
  controls_.assign(static_cast<std::size_t>(control_dim_), 0.0);
  durations_.assign(1, 0.0);
  parents_.assign(1, -1);
  max_cost_ = z(dim_ - 1);
  return 0;
}

int PlanTree::add(int parent, const Eigen::Ref<const State>& z, const Eigen::Ref<const Control>& u,
                  double duration) {
  if (parent < 0 || parent >= size()) throw std::out_of_range("PlanTree: bad parent id");
  if (z.size() != dim_) throw DimensionError("PlanTree: state dimension mismatch");
  if (u.size() != control_dim_) throw DimensionError("PlanTree: control dimension mismatch");
  states_.insert(states_.end(), z.data(), z.data() + dim_);
  controls_.insert(controls_.end(), u.data(), u.data() + control_dim_);
  durations_.push_back(duration);
  parents_.push_back(parent);
  max_cost_ = std::max(max_cost_, z(dim_ - 1));
  return size() - 1;
}

Eigen::Map<const State> PlanTree::state(int id) const {
  return Eigen::Map<const State>(&states_[static_cast<std::size_t>(id) * dim_], dim_);
}

Eigen::Map<const Control> PlanTree::control(int id) const {
  return Eigen::Map<const Control>(&controls_[static_cast<std::size_t>(id) * control_dim_], control_dim_);
}

std::vector<int> PlanTree::path_to(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("PlanTree: bad node id");
  std::vector<int> path;
  for (int v = id; v >= 0; v = parent(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

Trajectory PlanTree::trajectory_to(int id) const {
  const std::vector<int> path = path_to(id);
  Trajectory t;
  t.start = state(path.front());
  t.segments.reserve(path.size() - 1);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const int v = path[i];
    t.segments.push_back(Segment{state(parent(v)), control(v), duration(v), state(v)});
  }
  return t;
}

std::vector<int> PlanTree::compact(const std::vector<char>& keep) {
  if (keep.size() != static_cast<std::size_t>(size())) throw std::invalid_argument("PlanTree: keep mask size");
  std::vector<int> remap(keep.size(), -1);
  int next = 0;
  max_cost_ = 0.0;
  for (int v = 0; v < size(); ++v) {
    if (!keep[static_cast<std::size_t>(v)]) continue;
    const int p = parent(v);
    if (p >= 0 && remap[static_cast<std::size_t>(p)] < 0) {
      throw std::logic_error("PlanTree: kept node has a removed parent");
    }
    const auto src = static_cast<std::size_t>(v);
    const auto dst = static_cast<std::size_t>(next);
    std::copy_n(&states_[src * dim_], dim_, &states_[dst * dim_]);
    std::copy_n(&controls_[src * control_dim_], control_dim_, &controls_[dst * control_dim_]);
    durations_[dst] = durations_[src];
    parents_[dst] = p >= 0 ? remap[static_cast<std::size_t>(p)] : -1;
    max_cost_ = std::max(max_cost_, states_[dst * dim_ + dim_ - 1]);
    remap[src] = next++;
  }
  const auto n = static_cast<std::size_t>(next);
  states_.resize(n * dim_);
  controls_.resize(n * control_dim_);
  durations_.resize(n);
  parents_.resize(n);
  return remap;
}

void PlanTree::clear() {
  states_.clear();
  controls_.clear();
  durations_.clear();
  parents_.clear();
  max_cost_ = 0.0;
}

}  // namespace aoplan
