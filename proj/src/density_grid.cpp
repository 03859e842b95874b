#include "aoplan/nn_index.hpp"

#include <cmath>
#include <stdexcept>

namespace aoplan {

namespace {

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::size_t DensityGrid::CellKeyHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k.projection + 1);
  for (std::int64_t c : k.coords) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

DensityGrid::DensityGrid(int dim, int k, double h) : dim_(dim), k_(std::min(k, dim)), h_(h) {
  if (dim < 1) throw std::invalid_argument("density grid: dimension must be positive");
  if (k < 1 || k > kMaxProjectionDim) throw std::invalid_argument("density grid: k must be in [1, 4]");
  if (!(h > 0.0)) throw std::invalid_argument("density grid: resolution must be positive");
  std::vector<int> cur;
  combinations(dim_, k_, 0, cur, projections_);
}

DensityGrid::CellKey DensityGrid::cell_of(int projection, const Eigen::Ref<const State>& unit_point) const {
  CellKey key;
  key.projection = projection;
  const auto& axes = projections_[static_cast<std::size_t>(projection)];
  for (std::size_t j = 0; j < axes.size(); ++j) {
    key.coords[j] = static_cast<std::int64_t>(std::floor(unit_point(axes[j]) / h_));
  }
  return key;
}

void DensityGrid::insert(int id, const Eigen::Ref<const State>& unit_point) {
  if (unit_point.size() != dim_) throw DimensionError("density grid: point dimension mismatch");
  if (!unit_point.allFinite()) throw std::invalid_argument("density grid: non-finite point");
  if (id < 0) throw std::invalid_argument("density grid: ids must be non-negative");
  const std::size_t p = projections_.size();
  if (static_cast<std::size_t>(id) >= present_.size()) {
    present_.resize(static_cast<std::size_t>(id) + 1, 0);
    slots_.resize(present_.size() * p);
  }
  if (present_[static_cast<std::size_t>(id)]) throw std::invalid_argument("density grid: duplicate id");
  for (std::size_t j = 0; j < p; ++j) {
    const CellKey key = cell_of(static_cast<int>(j), unit_point);
    Cell& cell = cells_[key];
    if (cell.nodes.empty()) {
      cell.key = key;
      cell.occupied_index = occupied_.size();
      occupied_.push_back(&cell);
    }
    slots_[static_cast<std::size_t>(id) * p + j] = Slot{&cell, cell.nodes.size()};
    cell.nodes.push_back(id);
  }
  present_[static_cast<std::size_t>(id)] = 1;
  ++size_;
}

bool DensityGrid::remove(int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= present_.size() || !present_[static_cast<std::size_t>(id)]) {
    return false;
  }
  const std::size_t p = projections_.size();
  for (std::size_t j = 0; j < p; ++j) {
    const Slot slot = slots_[static_cast<std::size_t>(id) * p + j];
    Cell* cell = slot.cell;
    const int last = cell->nodes.back();
    cell->nodes[slot.index] = last;
    slots_[static_cast<std::size_t>(last) * p + j].index = slot.index;
    cell->nodes.pop_back();
    if (cell->nodes.empty()) {
      Cell* moved = occupied_.back();
      occupied_[cell->occupied_index] = moved;
      moved->occupied_index = cell->occupied_index;
      occupied_.pop_back();
      const CellKey key = cell->key;
      cells_.erase(key);
    }
  }
  present_[static_cast<std::size_t>(id)] = 0;
  --size_;
  return true;
}

void DensityGrid::clear() {
  cells_.clear();
  occupied_.clear();
  slots_.clear();
  present_.clear();
  size_ = 0;
}

int DensityGrid::count(const Eigen::Ref<const State>& unit_point) const {
  if (unit_point.size() != dim_) throw DimensionError("density grid: point dimension mismatch");
  int total = 0;
  for (std::size_t j = 0; j < projections_.size(); ++j) {
    const auto it = cells_.find(cell_of(static_cast<int>(j), unit_point));
    if (it != cells_.end()) total += static_cast<int>(it->second.nodes.size());
  }
  return total;
}

int DensityGrid::sample_source(Rng& rng) const {
  if (occupied_.empty()) throw std::logic_error("density grid: sample_source() on an empty grid");
  std::uniform_int_distribution<std::size_t> pick_cell(0, occupied_.size() - 1);
  const Cell* cell = occupied_[pick_cell(rng)];
  std::uniform_int_distribution<std::size_t> pick_node(0, cell->nodes.size() - 1);
  return cell->nodes[pick_node(rng)];
}

}  // namespace aoplan
