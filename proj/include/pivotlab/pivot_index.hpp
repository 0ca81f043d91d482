// Copyright 2026 The pivotlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIVOTLAB_PIVOT_INDEX_HPP_
#define PIVOTLAB_PIVOT_INDEX_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pivotlab/spaces.hpp"

namespace pivotlab {

enum class PivotStrategy { kRandom, kFarthestFirst, kIncrementalMeanRho };

std::string to_string(PivotStrategy s);
PivotStrategy parse_pivot_strategy(std::string_view name);

// Pool sizes used by kIncrementalMeanRho.
inline constexpr std::size_t kMeanRhoCandidatePool = 64;
inline constexpr std::size_t kMeanRhoPairSample = 1024;

struct PivotSet {
  std::vector<Point> pivots;
  // Dataset index each pivot was drawn from.
  std::vector<std::size_t> source_indices;
  PivotStrategy strategy = PivotStrategy::kRandom;
  std::uint64_t seed = 0;

  std::size_t size() const { return pivots.size(); }
};

// Chooses k pivots from the dataset.
//
//   kRandom              k distinct uniform draws
//   kFarthestFirst       first the point farthest from X[0], then repeatedly
//                        the point maximizing its distance to the nearest
//                        chosen pivot
//   kIncrementalMeanRho  greedily the candidate that maximizes the mean of
//                        rho_k over a fixed sample of dataset pairs
//
// Ties go to the lowest dataset index. Throws InvalidInput when k > n.
PivotSet select_pivots(const Dataset& dataset, std::size_t k,
                       PivotStrategy strategy, std::uint64_t seed);

struct QueryResult {
  // Range queries: ascending indices. kNN queries: ascending (distance, index).
  std::vector<std::size_t> matches;
  std::vector<double> distances;
  // |C_q|, points eliminated by the pivot lower bound.
  std::size_t discarded = 0;
  // Counted distance evaluations.
  std::uint64_t cost = 0;
  // Range radius, or the k-th neighbour distance for kNN.
  double radius = 0.0;
  Point query;
};

// Flat pivot table: row j holds rho(X_j, p_i) for every pivot i.
//
// Range queries discard x when rho_k(q, x) > r. On real spaces the test
// allows 1e-12 of floating-point slack so rounding never removes a point whose
// computed distance is exactly r. On the Hamming cube rho_k is evaluated on
// the integer lattice of bit counts and is exact.
class PivotIndex {
 public:
  static PivotIndex build(std::shared_ptr<const Dataset> dataset,
                          PivotSet pivots);
  // Wraps a precomputed table (used when loading a persisted index).
  static PivotIndex from_table(std::shared_ptr<const Dataset> dataset,
                               PivotSet pivots, std::vector<double> table);

  const Dataset& dataset() const { return *dataset_; }
  std::shared_ptr<const Dataset> dataset_ptr() const { return dataset_; }
  const PivotSet& pivots() const { return pivots_; }
  std::size_t size() const { return dataset_->size(); }
  std::size_t num_pivots() const { return pivots_.size(); }
  // Distance evaluations spent filling the table (n * k for build()).
  std::uint64_t build_cost() const { return build_cost_; }
  // Stored distances, n * k.
  std::size_t storage() const { return table_.size(); }

  std::span<const double> row(std::size_t j) const;
  std::span<const double> table() const { return table_; }

  // rho(q, p_i) for every pivot, counted.
  std::vector<double> pivot_distances(PointView q,
                                      DistanceCounter* counter) const;

  // sup_i |rho(q, p_i) - rho(X_j, p_i)|, 0 when there are no pivots.
  double rho_k(std::span<const double> pivot_dists_q, std::size_t j) const;

  QueryResult range_query(const Point& q, double r) const;
  QueryResult knn_query(const Point& q, std::size_t k_nn) const;

 private:
  PivotIndex(std::shared_ptr<const Dataset> dataset, PivotSet pivots,
             std::vector<double> table, std::uint64_t build_cost);

  bool discards(double lower_bound, double r) const;

  std::shared_ptr<const Dataset> dataset_;
  PivotSet pivots_;
  std::vector<double> table_;
  std::uint64_t build_cost_ = 0;
};

inline PivotIndex build_index(std::shared_ptr<const Dataset> dataset,
                              PivotSet pivots) {
  return PivotIndex::build(std::move(dataset), std::move(pivots));
}

// Exact search by evaluating all n distances. Cost n.
QueryResult linear_scan(const Dataset& dataset, const Point& q, double r);

// Index file: one JSON header line
//   {"format_version":1,"n":..,"k":..,"strategy":..,"seed":..,
//    "pivot_indices":[..],"encoding":"text"}
// followed by n lines of k space-separated distances (17 significant digits).
void write_index(std::ostream& out, const PivotIndex& index);
PivotIndex read_index(std::istream& in, std::shared_ptr<const Dataset> dataset);
void save_index(const std::string& path, const PivotIndex& index);
PivotIndex load_index(const std::string& path,
                      std::shared_ptr<const Dataset> dataset);

}  // namespace pivotlab

#endif  // PIVOTLAB_PIVOT_INDEX_HPP_
