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

#ifndef PIVOTLAB_CONCENTRATION_HPP_
#define PIVOTLAB_CONCENTRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pivotlab/spaces.hpp"

namespace pivotlab {

// Constants of a normal Levy family: alpha(eps) < C exp(-c eps^2 d).
struct LevyParams {
  double C = 1.0;
  double c = 1.0;
};

// Calibrated against the Chernoff-Hoeffding bound exp(-2 d t^2) for
// normalized coordinate sums on the cube.
inline constexpr LevyParams kHammingLevyParams{1.0, 2.0};

// exp(-(d - 1) eps^2 / 2).
double sphere_alpha_bound(std::size_t d, double eps);

// C exp(-c eps^2 d), unclamped.
double levy_bound(const LevyParams& params, std::size_t d, double eps);

// 2 k alpha(r/2): bound on the mass the pivot filter can discard. Returned raw;
// values >= 1 carry no information.
double pruning_bound(std::size_t k, double alpha_half_r);

// 1-Lipschitz test functions.
enum class TestFunction {
  kFirstCoordinate,   // omega_0, real spaces
  kCoordinateSum,     // (number of ones) / d, Hamming cube
  kDistanceToPoint,   // rho(., p) for a seeded random p, any space
};

struct ConcentrationEstimate {
  std::vector<double> epsilons;
  std::vector<double> alpha_hat;
  std::size_t sample_size = 0;
  std::string family;
};

// Lower estimate of the concentration function. For each test function f of a
// fixed family, A = {f <= M_f} has measure >= 1/2, and every point with
// f <= M_f + eps is counted as inside A_eps. alpha_hat(eps) is the largest
// empirical 1 - mu(A_eps) over the family; alpha_hat(0) = 1/2.
//
// Families: sphere and ball use coordinate projections and random unit linear
// functionals; the cube uses the normalized coordinate sum and distances to
// random points. Every function is used with both signs.
ConcentrationEstimate estimate_concentration(const SpaceKind& space,
                                             std::span<const double> epsilons,
                                             std::size_t n_samples,
                                             std::uint64_t seed);

// Empirical mu{|f - M| > eps}, M the empirical median of f.
double lipschitz_deviation(const SpaceKind& space, TestFunction f, double eps,
                           std::size_t n_samples, std::uint64_t seed);

struct MedianStats {
  // Lower middle order statistic.
  double median = 0.0;
  double q10 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  std::size_t sample_size = 0;
};

// Throws InvalidInput on an empty sample.
MedianStats median_stats(std::vector<double> values);

// Lower middle order statistic of values; values must be nonempty.
double lower_median(std::vector<double> values);

// Distances between n_pairs independent pairs of sample points.
std::vector<double> sample_pair_distances(const SpaceKind& space,
                                          std::size_t n_pairs,
                                          std::uint64_t seed);

MedianStats median_distance(const SpaceKind& space, std::size_t n_pairs,
                            std::uint64_t seed);

// Samples a dataset of n points and n_queries fresh centres, then takes the
// median of the nearest-neighbour distances.
MedianStats nn_distance_median(const SpaceKind& space, std::size_t n,
                               std::size_t n_queries, std::uint64_t seed);

// E(rho)^2 / (2 Var(rho)) with the unbiased variance. Throws
// DegenerateDistribution when the variance is zero.
double intrinsic_dimension(std::span<const double> pair_distances);
double intrinsic_dimension(const SpaceKind& space, std::size_t n_pairs,
                           std::uint64_t seed);

}  // namespace pivotlab

#endif  // PIVOTLAB_CONCENTRATION_HPP_
