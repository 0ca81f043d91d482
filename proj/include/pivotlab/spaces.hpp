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

#ifndef PIVOTLAB_SPACES_HPP_
#define PIVOTLAB_SPACES_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pivotlab/rng.hpp"

namespace pivotlab {

enum class SpaceType { kHammingCube, kSphere, kBall };
enum class SphereMetric { kEuclidean, kGeodesic };

// A metric space with its natural probability measure.
//
//   HammingCube  {0,1}^d, normalized Hamming distance, uniform measure
//   Sphere       unit sphere in R^d, chord (default) or geodesic distance,
//                rotation-invariant measure
//   Ball         unit ball in R^d, Euclidean distance, uniform measure
class SpaceKind {
 public:
  static SpaceKind hamming(std::size_t d);
  static SpaceKind sphere(std::size_t d,
                          SphereMetric metric = SphereMetric::kEuclidean);
  static SpaceKind ball(std::size_t d);

  // Parses "hamming" | "sphere" | "ball" and "euclidean" | "geodesic".
  // The metric name is ignored for the non-sphere spaces.
  static SpaceKind parse(std::string_view kind, std::size_t d,
                         std::string_view metric = "euclidean");

  SpaceType type() const { return type_; }
  std::size_t dim() const { return dim_; }
  SphereMetric metric() const { return metric_; }
  bool is_binary() const { return type_ == SpaceType::kHammingCube; }
  // 64-bit words per packed Hamming point; 0 for real spaces.
  std::size_t words() const { return is_binary() ? (dim_ + 63) / 64 : 0; }
  double diameter() const;

  std::string name() const;
  std::string metric_name() const;

  friend bool operator==(const SpaceKind&, const SpaceKind&) = default;

 private:
  SpaceKind(SpaceType type, std::size_t d, SphereMetric metric);

  SpaceType type_;
  std::size_t dim_;
  SphereMetric metric_;
};

// Non-owning view of one point. Binary points carry packed words (bit i lives
// in word i / 64 at position i % 64, padding bits zero); real points carry
// their coordinates.
struct PointView {
  std::span<const std::uint64_t> bits;
  std::span<const double> coords;
  std::size_t dim = 0;
  bool binary = false;
};

class Point {
 public:
  Point() = default;

  static Point from_bits(std::size_t d, std::vector<std::uint64_t> words);
  // "1010": character i is bit i.
  static Point from_bit_string(std::string_view bits);
  static Point from_coords(std::vector<double> coords);

  PointView view() const;
  std::size_t dim() const { return dim_; }
  bool binary() const { return binary_; }
  bool bit(std::size_t i) const;
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<const double> coords() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::vector<double> coords_;
  std::size_t dim_ = 0;
  bool binary_ = false;
};

// Throws InvalidInput unless p is a valid point of space: matching
// representation and length, zero padding bits, sphere norm within 1e-9 of 1,
// ball norm at most 1 + 1e-12.
void validate_point(const SpaceKind& space, PointView p);

// Counts true-distance evaluations for one query.
class DistanceCounter {
 public:
  void increment() { ++count_; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_ = 0;
};

// A finite i.i.d. sample X of a space. Points are stored contiguously.
class Dataset {
 public:
  Dataset(SpaceKind space, std::uint64_t seed) : space_(space), seed_(seed) {}

  // Validates p against the space.
  void push_back(PointView p);
  void push_back(const Point& p) { push_back(p.view()); }

  const SpaceKind& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  PointView point(std::size_t j) const;
  Point copy_point(std::size_t j) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  SpaceKind space_;
  std::uint64_t seed_;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<double> coords_;
};

// rho(x, y). Throws InvalidInput when x and y do not both match the space's
// representation and dimension. Increments counter by one when supplied.
double distance(const SpaceKind& space, PointView x, PointView y,
                DistanceCounter* counter = nullptr);
inline double distance(const SpaceKind& space, const Point& x, const Point& y,
                       DistanceCounter* counter = nullptr) {
  return distance(space, x.view(), y.view(), counter);
}

// Draws one point from the space's natural measure.
Point sample_point(const SpaceKind& space, Rng& rng);

// n i.i.d. points; identical (space, n, seed) reproduce identical datasets.
Dataset sample(const SpaceKind& space, std::size_t n, std::uint64_t seed);

// Coordinates (axis_a, axis_b) of every point, in dataset order.
std::vector<std::pair<double, double>> project2d(const Dataset& dataset,
                                                 std::size_t axis_a,
                                                 std::size_t axis_b);

// Dataset text format: one JSON header line
//   {"format_version":1,"kind":..,"d":..,"n":..,"seed":..,"metric_variant":..}
// followed by n point lines. Hamming points are lowercase hex, d bits
// most-significant-first, zero padded to whole bytes; real points are d
// space-separated decimals with 17 significant digits.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::string& path, const Dataset& dataset);
Dataset load_dataset(const std::string& path);

// Point text as used in dataset files ("a5" for Hamming; "0.5 -0.25" for
// real spaces, commas also accepted).
std::string format_point(const SpaceKind& space, PointView p);
Point parse_point(const SpaceKind& space, std::string_view text);

}  // namespace pivotlab

#endif  // PIVOTLAB_SPACES_HPP_
