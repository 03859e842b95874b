#pragma once

#include "aoplan/core_space.hpp"

#include <array>
#include <cstddef>
#include <unordered_map>
#include <vector>

namespace aoplan {

/// Exact nearest-neighbour index under a `Metric`, including weighted axes
/// and angular wraparound.
///
/// Points live in bucketed leaves that split at the median of their widest
/// axis. Removal tombstones a point; the tree is rebuilt from the survivors
/// once more than half of the stored points are dead. Distances to candidate
/// points are evaluated with `aoplan::distance` on the raw coordinates, so a
/// query returns exactly the linear-scan minimum.
///
/// Ids must be non-negative; storage is indexed by id.
class KdTree {
 public:
  explicit KdTree(Metric metric, int leaf_size = 16);

  void insert(int id, const Eigen::Ref<const State>& p);
  /// Returns false when `id` is not present.
  bool remove(int id);
  /// Throws std::logic_error on an empty index.
  int nearest(const Eigen::Ref<const State>& q) const;
  void rebuild();
  void clear();

  std::size_t size() const { return alive_count_; }
  bool empty() const { return alive_count_ == 0; }
  const Metric& metric() const { return metric_; }

 private:
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    int child[2] = {-1, -1};
    std::vector<int> bucket;  // slot indices, leaves only
  };

  int dim() const { return metric_.dim(); }
  const double* raw(int slot) const { return &raw_[static_cast<std::size_t>(slot) * dim()]; }
  const double* key(int slot) const { return &keys_[static_cast<std::size_t>(slot) * dim()]; }
  void split_leaf(int node);
  int build(std::vector<int>& slots, std::size_t begin, std::size_t end);
  double box_lower_bound(const std::vector<double>& q, const std::vector<double>& lo,
                         const std::vector<double>& hi) const;
  void search(int node, const State& q_raw, const std::vector<double>& q_key, std::vector<double>& lo,
              std::vector<double>& hi, int& best_slot, double& best_d2) const;

  Metric metric_;
  int leaf_size_;
  std::vector<double> raw_;
  std::vector<double> keys_;  // angular axes wrapped into [0, 2pi)
  std::vector<int> ids_;
  std::vector<char> alive_;
  std::vector<int> slot_of_;  // indexed by id, -1 when absent
  std::vector<Node> nodes_;
  std::size_t alive_count_ = 0;
};

/// Multi-grid density estimate over unit-scaled points: one grid of cell
/// width h for every size-k subset of the coordinates.
class DensityGrid {
 public:
  static constexpr int kMaxProjectionDim = 4;

  DensityGrid(int dim, int k = 3, double h = 0.1);

  void insert(int id, const Eigen::Ref<const State>& unit_point);
  bool remove(int id);
  void clear();

  /// Sum over projections of the occupancy of the point's cell.
  int count(const Eigen::Ref<const State>& unit_point) const;
  /// Uniform over occupied (projection, cell) pairs, then uniform within the cell.
  int sample_source(Rng& rng) const;

  int num_projections() const { return static_cast<int>(projections_.size()); }
  const std::vector<std::vector<int>>& projections() const { return projections_; }
  std::size_t num_occupied_cells() const { return occupied_.size(); }
  std::size_t size() const { return size_; }
  double resolution() const { return h_; }
  int dim() const { return dim_; }

  struct CellKey {
    int projection = 0;
    std::array<std::int64_t, kMaxProjectionDim> coords{};
    bool operator==(const CellKey& o) const = default;
  };
  CellKey cell_of(int projection, const Eigen::Ref<const State>& unit_point) const;

 private:
  struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };
  struct Cell {
    CellKey key;
    std::vector<int> nodes;
    std::size_t occupied_index = 0;
  };
  struct Slot {
    Cell* cell = nullptr;
    std::size_t index = 0;
  };

  int dim_;
  int k_;
  double h_;
  std::vector<std::vector<int>> projections_;
  std::unordered_map<CellKey, Cell, CellKeyHash> cells_;
  std::vector<Cell*> occupied_;
  std::vector<Slot> slots_;  // num_projections() entries per id
  std::vector<char> present_;
  std::size_t size_ = 0;
};

}  // namespace aoplan
