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

#include "pivotlab/concentration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "pivotlab/error.hpp"

namespace pivotlab {

namespace {

constexpr std::size_t kMinMonteCarloSamples = 100;
constexpr std::size_t kCoordinateFunctions = 8;
constexpr std::size_t kRandomFunctions = 4;

using Evaluator = std::function<double(PointView)>;

std::vector<double> random_unit_vector(std::size_t d, Rng& rng) {
  Point p = sample_point(SpaceKind::sphere(d), rng);
  return {p.coords().begin(), p.coords().end()};
}

// The shipped 1-Lipschitz family for a space.
std::vector<Evaluator> test_family(const SpaceKind& space, std::uint64_t seed,
                                   std::string* name) {
  std::vector<Evaluator> family;
  Rng rng(derive_seed(seed, {1}));
  const std::size_t d = space.dim();
  if (space.is_binary()) {
    *name = "coordinate_sum+pivot_distance";
    family.emplace_back([d](PointView p) {
      std::size_t ones = 0;
      for (std::uint64_t w : p.bits) ones += std::popcount(w);
      return static_cast<double>(ones) / static_cast<double>(d);
    });
    for (std::size_t i = 0; i < kRandomFunctions; ++i) {
      Point center = sample_point(space, rng);
      family.emplace_back([space, center](PointView p) {
        return distance(space, p, center.view());
      });
    }
    return family;
  }
  *name = "coordinates+linear_functionals";
  for (std::size_t i = 0; i < std::min(d, kCoordinateFunctions); ++i) {
    family.emplace_back([i](PointView p) { return p.coords[i]; });
  }
  for (std::size_t i = 0; i < kRandomFunctions; ++i) {
    std::vector<double> u = random_unit_vector(d, rng);
    family.emplace_back([u](PointView p) {
      double s = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * p.coords[j];
      return s;
    });
  }
  return family;
}

Evaluator single_test_function(const SpaceKind& space, TestFunction f,
                               std::uint64_t seed) {
  switch (f) {
    case TestFunction::kFirstCoordinate:
      if (space.is_binary()) {
        throw InvalidInput("first-coordinate test function needs a real space");
      }
      return [](PointView p) { return p.coords[0]; };
    case TestFunction::kCoordinateSum:
      if (!space.is_binary()) {
        throw InvalidInput("coordinate-sum test function needs the Hamming cube");
      }
      return [d = space.dim()](PointView p) {
        std::size_t ones = 0;
        for (std::uint64_t w : p.bits) ones += std::popcount(w);
        return static_cast<double>(ones) / static_cast<double>(d);
      };
    case TestFunction::kDistanceToPoint: {
      Rng rng(derive_seed(seed, {1}));
      Point center = sample_point(space, rng);
      return [space, center](PointView p) {
        return distance(space, p, center.view());
      };
    }
  }
  throw InvalidInput("unknown test function");
}

std::size_t lower_middle(std::size_t n) { return (n - 1) / 2; }

}  // namespace

double sphere_alpha_bound(std::size_t d, double eps) {
  if (d < 2) throw InvalidInput("sphere_alpha_bound: d must be >= 2");
  if (!(eps >= 0.0)) throw InvalidInput("sphere_alpha_bound: eps must be >= 0");
  return std::exp(-static_cast<double>(d - 1) * eps * eps / 2.0);
}

double levy_bound(const LevyParams& params, std::size_t d, double eps) {
  if (!(params.C > 0.0) || !(params.c > 0.0)) {
    throw InvalidInput("levy_bound: C and c must be positive");
  }
  if (d < 1) throw InvalidInput("levy_bound: d must be >= 1");
  if (!(eps >= 0.0)) throw InvalidInput("levy_bound: eps must be >= 0");
  return params.C * std::exp(-params.c * eps * eps * static_cast<double>(d));
}

double pruning_bound(std::size_t k, double alpha_half_r) {
  return 2.0 * static_cast<double>(k) * alpha_half_r;
}

ConcentrationEstimate estimate_concentration(const SpaceKind& space,
                                             std::span<const double> epsilons,
                                             std::size_t n_samples,
                                             std::uint64_t seed) {
  if (n_samples < kMinMonteCarloSamples) {
    throw InvalidInput("estimate_concentration: need at least 100 samples");
  }
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0) || (i && epsilons[i] < epsilons[i - 1])) {
      throw InvalidInput("epsilons must be non-negative and ascending");
    }
  }
  ConcentrationEstimate out;
  out.epsilons.assign(epsilons.begin(), epsilons.end());
  out.alpha_hat.assign(epsilons.size(), 0.0);
  out.sample_size = n_samples;
  const std::vector<Evaluator> family = test_family(space, seed, &out.family);

  std::vector<std::vector<double>> values(family.size(),
                                          std::vector<double>(n_samples));
  Rng rng(derive_seed(seed, {0}));
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Point p = sample_point(space, rng);
    for (std::size_t f = 0; f < family.size(); ++f) {
      values[f][s] = family[f](p.view());
    }
  }

  const double n = static_cast<double>(n_samples);
  for (auto& v : values) {
    for (int sign : {1, -1}) {
      std::vector<double> g = v;
      if (sign < 0) {
        for (double& x : g) x = -x;
      }
      std::sort(g.begin(), g.end());
      const double median = g[lower_middle(g.size())];
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        if (epsilons[e] == 0.0) continue;
        // Points with g <= M + eps count as inside A_eps.
        const auto inside =
            std::upper_bound(g.begin(), g.end(), median + epsilons[e]);
        const double outside = static_cast<double>(g.end() - inside) / n;
        out.alpha_hat[e] = std::max(out.alpha_hat[e], outside);
      }
    }
  }
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    if (epsilons[e] == 0.0) out.alpha_hat[e] = 0.5;
  }
  return out;
}

double lipschitz_deviation(const SpaceKind& space, TestFunction f, double eps,
                           std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) {
    throw InvalidInput("lipschitz_deviation: need at least one sample");
  }
  if (!(eps >= 0.0)) throw InvalidInput("lipschitz_deviation: eps must be >= 0");
  const Evaluator fn = single_test_function(space, f, seed);
  std::vector<double> values(n_samples);
  Rng rng(derive_seed(seed, {0}));
  for (double& v : values) v = fn(sample_point(space, rng).view());
  const double median = lower_median(values);
  std::size_t off = 0;
  for (double v : values) {
    if (std::abs(v - median) > eps) ++off;
  }
  return static_cast<double>(off) / static_cast<double>(n_samples);
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(
                                        lower_middle(values.size()));
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

MedianStats median_stats(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto quantile = [&](double q) {
    return values[static_cast<std::size_t>(
        std::floor(q * static_cast<double>(n - 1)))];
  };
  MedianStats out;
  out.median = values[lower_middle(n)];
  out.q10 = quantile(0.10);
  out.q25 = quantile(0.25);
  out.q75 = quantile(0.75);
  out.q90 = quantile(0.90);
  out.sample_size = n;
  return out;
}

std::vector<double> sample_pair_distances(const SpaceKind& space,
                                          std::size_t n_pairs,
                                          std::uint64_t seed) {
  std::vector<double> out(n_pairs);
  Rng rng(derive_seed(seed, {0}));
  for (double& v : out) {
    const Point x = sample_point(space, rng);
    const Point y = sample_point(space, rng);
    v = distance(space, x, y);
  }
  return out;
}

MedianStats median_distance(const SpaceKind& space, std::size_t n_pairs,
                            std::uint64_t seed) {
  if (n_pairs == 0) throw InvalidInput("median_distance: n_pairs must be >= 1");
  return median_stats(sample_pair_distances(space, n_pairs, seed));
}

MedianStats nn_distance_median(const SpaceKind& space, std::size_t n,
                               std::size_t n_queries, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("nn_distance_median: n must be >= 1");
  if (n_queries == 0) {
    throw InvalidInput("nn_distance_median: n_queries must be >= 1");
  }
  const Dataset data = sample(space, n, derive_seed(seed, {0}));
  Rng rng(derive_seed(seed, {1}));
  std::vector<double> nn(n_queries);
  for (double& v : nn) {
    const Point q = sample_point(space, rng);
    v = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < data.size(); ++j) {
      v = std::min(v, distance(space, q.view(), data.point(j)));
    }
  }
  return median_stats(std::move(nn));
}

double intrinsic_dimension(std::span<const double> pair_distances) {
  const std::size_t n = pair_distances.size();
  if (n < 2) throw InvalidInput("intrinsic_dimension: need >= 2 distances");
  double mean = 0.0;
  for (double v : pair_distances) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : pair_distances) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  if (var == 0.0) {
    throw DegenerateDistribution(
        "intrinsic_dimension: distances have zero variance");
  }
  return mean * mean / (2.0 * var);
}

double intrinsic_dimension(const SpaceKind& space, std::size_t n_pairs,
                           std::uint64_t seed) {
  if (n_pairs < kMinMonteCarloSamples) {
    throw InvalidInput("intrinsic_dimension: need at least 100 pairs");
  }
  return intrinsic_dimension(sample_pair_distances(space, n_pairs, seed));
}

}  // namespace pivotlab
