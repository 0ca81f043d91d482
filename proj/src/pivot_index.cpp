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

#include "pivotlab/pivot_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <utility>

#include <json.hpp>

#include "pivotlab/error.hpp"
#include "text.hpp"

namespace pivotlab {

namespace {

constexpr double kRealSpaceSlack = 1e-12;

// First k entries of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> distinct_draws(std::size_t n, std::size_t k,
                                        Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> farthest_first(const Dataset& data, std::size_t k) {
  const SpaceKind& space = data.space();
  const std::size_t n = data.size();
  std::vector<double> nearest(n);
  std::vector<bool> chosen(n, false);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j) {
    nearest[j] = distance(space, data.point(j), data.point(0));
  }
  while (out.size() < k) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      if (best == n || nearest[j] > nearest[best]) best = j;
    }
    chosen[best] = true;
    out.push_back(best);
    // The seed point X[0] only steers the first choice; afterwards the
    // distances are to the chosen pivots alone.
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = distance(space, data.point(j), data.point(best));
      nearest[j] = out.size() == 1 ? dj : std::min(nearest[j], dj);
    }
  }
  return out;
}

std::vector<std::size_t> incremental_mean_rho(const Dataset& data,
                                              std::size_t k,
                                              std::uint64_t seed) {
  const SpaceKind& space = data.space();
  const std::size_t n = data.size();
  const std::size_t pool_size =
      std::max(std::min(n, kMeanRhoCandidatePool), k);
  Rng pool_rng(derive_seed(seed, {2}));
  const std::vector<std::size_t> pool = distinct_draws(n, pool_size, pool_rng);

  const std::size_t pair_count =
      n > kMeanRhoPairSample ? kMeanRhoPairSample
                             : std::min(n * n, kMeanRhoPairSample);
  Rng pair_rng(derive_seed(seed, {3}));
  std::vector<std::pair<std::size_t, std::size_t>> pairs(pair_count);
  for (auto& [a, b] : pairs) {
    a = pair_rng.below(n);
    b = pair_rng.below(n);
  }

  // gaps[c][p] = |rho(a_p, c) - rho(b_p, c)| for candidate c and pair p.
  std::vector<std::vector<double>> gaps(pool.size(),
                                        std::vector<double>(pair_count));
  for (std::size_t c = 0; c < pool.size(); ++c) {
    const PointView cand = data.point(pool[c]);
    for (std::size_t p = 0; p < pair_count; ++p) {
      gaps[c][p] =
          std::abs(distance(space, data.point(pairs[p].first), cand) -
                   distance(space, data.point(pairs[p].second), cand));
    }
  }

  std::vector<double> current(pair_count, 0.0);
  std::vector<bool> used(pool.size(), false);
  std::vector<std::size_t> out;
  while (out.size() < k) {
    std::size_t best = pool.size();
    double best_mean = -1.0;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (used[c]) continue;
      double sum = 0.0;
      for (std::size_t p = 0; p < pair_count; ++p) {
        sum += std::max(current[p], gaps[c][p]);
      }
      const double mean = sum / static_cast<double>(pair_count);
      if (mean > best_mean ||
          (mean == best_mean && pool[c] < pool[best])) {
        best = c;
        best_mean = mean;
      }
    }
    used[best] = true;
    out.push_back(pool[best]);
    for (std::size_t p = 0; p < pair_count; ++p) {
      current[p] = std::max(current[p], gaps[best][p]);
    }
  }
  return out;
}

}  // namespace

std::string to_string(PivotStrategy s) {
  switch (s) {
    case PivotStrategy::kRandom:
      return "random";
    case PivotStrategy::kFarthestFirst:
      return "farthest_first";
    case PivotStrategy::kIncrementalMeanRho:
      return "incremental_mean_rho";
  }
  return "";
}

PivotStrategy parse_pivot_strategy(std::string_view name) {
  if (name == "random") return PivotStrategy::kRandom;
  if (name == "farthest_first") return PivotStrategy::kFarthestFirst;
  if (name == "incremental_mean_rho") return PivotStrategy::kIncrementalMeanRho;
  throw InvalidInput("unknown pivot strategy '" + std::string(name) + "'");
}

PivotSet select_pivots(const Dataset& dataset, std::size_t k,
                       PivotStrategy strategy, std::uint64_t seed) {
  PivotSet out;
  out.strategy = strategy;
  out.seed = seed;
  if (k == 0) return out;
  if (k > dataset.size()) {
    throw InvalidInput("cannot draw " + std::to_string(k) +
                       " pivots from a dataset of " +
                       std::to_string(dataset.size()) + " points");
  }
  switch (strategy) {
    case PivotStrategy::kRandom: {
      Rng rng(derive_seed(seed, {1}));
      out.source_indices = distinct_draws(dataset.size(), k, rng);
      break;
    }
    case PivotStrategy::kFarthestFirst:
      out.source_indices = farthest_first(dataset, k);
      break;
    case PivotStrategy::kIncrementalMeanRho:
      out.source_indices = incremental_mean_rho(dataset, k, seed);
      break;
  }
  for (std::size_t j : out.source_indices) {
    out.pivots.push_back(dataset.copy_point(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PivotIndex

PivotIndex::PivotIndex(std::shared_ptr<const Dataset> dataset, PivotSet pivots,
                       std::vector<double> table, std::uint64_t build_cost)
    : dataset_(std::move(dataset)),
      pivots_(std::move(pivots)),
      table_(std::move(table)),
      build_cost_(build_cost) {}

PivotIndex PivotIndex::build(std::shared_ptr<const Dataset> dataset,
                             PivotSet pivots) {
  if (!dataset) throw InvalidInput("build_index: null dataset");
  const SpaceKind& space = dataset->space();
  for (const Point& p : pivots.pivots) validate_point(space, p.view());
  const std::size_t n = dataset->size();
  const std::size_t k = pivots.size();
  std::vector<double> table(n * k);
  DistanceCounter counter;
  for (std::size_t j = 0; j < n; ++j) {
    const PointView x = dataset->point(j);
    for (std::size_t i = 0; i < k; ++i) {
      table[j * k + i] = distance(space, x, pivots.pivots[i].view(), &counter);
    }
  }
  const std::uint64_t cost = counter.count();
  return PivotIndex(std::move(dataset), std::move(pivots), std::move(table),
                    cost);
}

PivotIndex PivotIndex::from_table(std::shared_ptr<const Dataset> dataset,
                                  PivotSet pivots, std::vector<double> table) {
  if (!dataset) throw InvalidInput("from_table: null dataset");
  for (const Point& p : pivots.pivots) {
    validate_point(dataset->space(), p.view());
  }
  if (table.size() != dataset->size() * pivots.size()) {
    throw InvalidInput("pivot table size does not match n * k");
  }
  for (double v : table) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("pivot table holds a negative or non-finite distance");
    }
  }
  return PivotIndex(std::move(dataset), std::move(pivots), std::move(table), 0);
}

std::span<const double> PivotIndex::row(std::size_t j) const {
  const std::size_t k = num_pivots();
  return std::span<const double>(table_).subspan(j * k, k);
}

std::vector<double> PivotIndex::pivot_distances(
    PointView q, DistanceCounter* counter) const {
  std::vector<double> out;
  out.reserve(num_pivots());
  for (const Point& p : pivots_.pivots) {
    out.push_back(distance(dataset_->space(), q, p.view(), counter));
  }
  return out;
}

double PivotIndex::rho_k(std::span<const double> pivot_dists_q,
                         std::size_t j) const {
  const std::size_t k = num_pivots();
  if (pivot_dists_q.size() != k) {
    throw InvalidInput("rho_k: expected one query distance per pivot");
  }
  if (k == 0) return 0.0;
  const double* row = table_.data() + j * k;
  const SpaceKind& space = dataset_->space();
  if (space.is_binary()) {
    // Distances are m / d for integer bit counts m; recover m and take the
    // difference exactly.
    const double d = static_cast<double>(space.dim());
    long long widest = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const long long gap =
          std::llabs(std::llround(pivot_dists_q[i] * d) - std::llround(row[i] * d));
      widest = std::max(widest, gap);
    }
    return static_cast<double>(widest) / d;
  }
  double widest = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    widest = std::max(widest, std::abs(pivot_dists_q[i] - row[i]));
  }
  return widest;
}

bool PivotIndex::discards(double lower_bound, double r) const {
  if (dataset_->space().is_binary()) return lower_bound > r;
  return lower_bound > r + kRealSpaceSlack;
}

QueryResult PivotIndex::range_query(const Point& q, double r) const {
  const SpaceKind& space = dataset_->space();
  validate_point(space, q.view());
  if (!(r >= 0.0)) throw InvalidInput("range_query: radius must be >= 0");
  QueryResult out;
  out.radius = r;
  out.query = q;
  DistanceCounter counter;
  const std::vector<double> qd = pivot_distances(q.view(), &counter);
  for (std::size_t j = 0; j < size(); ++j) {
    if (discards(rho_k(qd, j), r)) {
      ++out.discarded;
      continue;
    }
    const double dist = distance(space, q.view(), dataset_->point(j), &counter);
    if (dist <= r) {
      out.matches.push_back(j);
      out.distances.push_back(dist);
    }
  }
  out.cost = counter.count();
  return out;
}

QueryResult PivotIndex::knn_query(const Point& q, std::size_t k_nn) const {
  const SpaceKind& space = dataset_->space();
  validate_point(space, q.view());
  if (k_nn == 0 || k_nn > size()) {
    throw InvalidInput("knn_query: k_nn must lie in [1, n]");
  }
  QueryResult out;
  out.query = q;
  DistanceCounter counter;
  const std::vector<double> qd = pivot_distances(q.view(), &counter);

  std::vector<std::pair<double, std::size_t>> candidates(size());
  for (std::size_t j = 0; j < size(); ++j) candidates[j] = {rho_k(qd, j), j};
  std::sort(candidates.begin(), candidates.end());

  // Max-heap on (distance, index): top is the current k_nn-th best.
  std::priority_queue<std::pair<double, std::size_t>> best;
  std::size_t verified = 0;
  for (const auto& [lower_bound, j] : candidates) {
    // A candidate whose lower bound equals the k_nn-th distance may still win
    // the index tie-break, so only a strictly larger bound stops the scan.
    if (best.size() == k_nn && discards(lower_bound, best.top().first)) break;
    const double dist = distance(space, q.view(), dataset_->point(j), &counter);
    ++verified;
    const std::pair<double, std::size_t> entry{dist, j};
    if (best.size() < k_nn) {
      best.push(entry);
    } else if (entry < best.top()) {
      best.pop();
      best.push(entry);
    }
  }
  out.discarded = size() - verified;
  out.cost = counter.count();
  std::vector<std::pair<double, std::size_t>> ordered;
  while (!best.empty()) {
    ordered.push_back(best.top());
    best.pop();
  }
  std::reverse(ordered.begin(), ordered.end());
  for (const auto& [dist, j] : ordered) {
    out.matches.push_back(j);
    out.distances.push_back(dist);
  }
  out.radius = out.distances.back();
  return out;
}

QueryResult linear_scan(const Dataset& dataset, const Point& q, double r) {
  const SpaceKind& space = dataset.space();
  validate_point(space, q.view());
  if (!(r >= 0.0)) throw InvalidInput("linear_scan: radius must be >= 0");
  QueryResult out;
  out.radius = r;
  out.query = q;
  DistanceCounter counter;
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    const double dist = distance(space, q.view(), dataset.point(j), &counter);
    if (dist <= r) {
      out.matches.push_back(j);
      out.distances.push_back(dist);
    }
  }
  out.cost = counter.count();
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

void write_index(std::ostream& out, const PivotIndex& index) {
  nlohmann::ordered_json header;
  header["format_version"] = 1;
  header["n"] = index.size();
  header["k"] = index.num_pivots();
  header["strategy"] = to_string(index.pivots().strategy);
  header["seed"] = index.pivots().seed;
  header["pivot_indices"] = index.pivots().source_indices;
  header["encoding"] = "text";
  out << header.dump() << '\n';
  for (std::size_t j = 0; j < index.size(); ++j) {
    const auto r = index.row(j);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ' ';
      out << detail::format_double(r[i]);
    }
    out << '\n';
  }
}

PivotIndex read_index(std::istream& in,
                      std::shared_ptr<const Dataset> dataset) {
  if (!dataset) throw InvalidInput("read_index: null dataset");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("index: missing header");
  PivotSet pivots;
  std::size_t n = 0;
  std::size_t k = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.value("format_version", 1) != 1) {
      throw InvalidInput("index: unsupported format_version");
    }
    if (header.value("encoding", std::string("text")) != "text") {
      throw InvalidInput("index: only the text encoding is supported");
    }
    n = header.at("n").get<std::size_t>();
    k = header.at("k").get<std::size_t>();
    pivots.strategy = parse_pivot_strategy(header.at("strategy").get<std::string>());
    pivots.seed = header.at("seed").get<std::uint64_t>();
    pivots.source_indices =
        header.at("pivot_indices").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("index: bad header: ") + e.what());
  }
  if (n != dataset->size()) {
    throw InvalidInput("index was built for " + std::to_string(n) +
                       " points, dataset has " +
                       std::to_string(dataset->size()));
  }
  if (pivots.source_indices.size() != k) {
    throw InvalidInput("index: pivot_indices length differs from k");
  }
  for (std::size_t j : pivots.source_indices) {
    if (j >= n) throw InvalidInput("index: pivot index out of range");
    pivots.pivots.push_back(dataset->copy_point(j));
  }
  std::vector<double> table;
  table.reserve(n * k);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(in, line)) throw InvalidInput("index: truncated table");
    const auto tokens = detail::split_tokens(line);
    if (tokens.size() != k) throw InvalidInput("index: row has wrong width");
    for (auto t : tokens) table.push_back(detail::parse_double(t));
  }
  return PivotIndex::from_table(std::move(dataset), std::move(pivots),
                                std::move(table));
}

void save_index(const std::string& path, const PivotIndex& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_index(out, index);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

PivotIndex load_index(const std::string& path,
                      std::shared_ptr<const Dataset> dataset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_index(in, std::move(dataset));
}

}  // namespace pivotlab
