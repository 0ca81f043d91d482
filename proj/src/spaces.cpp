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

#include "pivotlab/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "pivotlab/error.hpp"
#include "text.hpp"

namespace pivotlab {

namespace {

constexpr double kSphereNormTolerance = 1e-9;
constexpr double kBallNormTolerance = 1e-12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_binary_padding(std::size_t d, std::span<const std::uint64_t> words) {
  if (d % 64 == 0 || words.empty()) return;
  const std::uint64_t pad_mask = ~((std::uint64_t{1} << (d % 64)) - 1);
  if (words.back() & pad_mask) {
    throw InvalidInput("packed bit string has nonzero padding bits");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceKind

SpaceKind::SpaceKind(SpaceType type, std::size_t d, SphereMetric metric)
    : type_(type), dim_(d), metric_(metric) {
  if (d == 0) throw InvalidInput("space dimension must be >= 1");
}

SpaceKind SpaceKind::hamming(std::size_t d) {
  return SpaceKind(SpaceType::kHammingCube, d, SphereMetric::kEuclidean);
}

SpaceKind SpaceKind::sphere(std::size_t d, SphereMetric metric) {
  return SpaceKind(SpaceType::kSphere, d, metric);
}

SpaceKind SpaceKind::ball(std::size_t d) {
  return SpaceKind(SpaceType::kBall, d, SphereMetric::kEuclidean);
}

SpaceKind SpaceKind::parse(std::string_view kind, std::size_t d,
                           std::string_view metric) {
  if (kind == "hamming") return hamming(d);
  if (kind == "ball") return ball(d);
  if (kind == "sphere") {
    if (metric == "euclidean" || metric.empty()) return sphere(d);
    if (metric == "geodesic") return sphere(d, SphereMetric::kGeodesic);
    throw InvalidInput("unknown sphere metric '" + std::string(metric) + "'");
  }
  throw InvalidInput("unknown space kind '" + std::string(kind) + "'");
}

double SpaceKind::diameter() const {
  switch (type_) {
    case SpaceType::kHammingCube:
      return 1.0;
    case SpaceType::kSphere:
      return metric_ == SphereMetric::kGeodesic ? std::acos(-1.0) : 2.0;
    case SpaceType::kBall:
      return 2.0;
  }
  return 0.0;
}

std::string SpaceKind::name() const {
  switch (type_) {
    case SpaceType::kHammingCube:
      return "hamming";
    case SpaceType::kSphere:
      return "sphere";
    case SpaceType::kBall:
      return "ball";
  }
  return "";
}

std::string SpaceKind::metric_name() const {
  if (is_binary()) return "hamming";
  if (type_ == SpaceType::kSphere && metric_ == SphereMetric::kGeodesic) {
    return "geodesic";
  }
  return "euclidean";
}

// ---------------------------------------------------------------------------
// Point

Point Point::from_bits(std::size_t d, std::vector<std::uint64_t> words) {
  if (d == 0) throw InvalidInput("bit string length must be >= 1");
  if (words.size() != (d + 63) / 64) {
    throw InvalidInput("packed word count does not match bit length");
  }
  check_binary_padding(d, words);
  Point p;
  p.words_ = std::move(words);
  p.dim_ = d;
  p.binary_ = true;
  return p;
}

Point Point::from_bit_string(std::string_view bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      words[i / 64] |= std::uint64_t{1} << (i % 64);
    } else if (bits[i] != '0') {
      throw InvalidInput("bit string may only contain '0' and '1'");
    }
  }
  return from_bits(bits.size(), std::move(words));
}

Point Point::from_coords(std::vector<double> coords) {
  if (coords.empty()) throw InvalidInput("point must have >= 1 coordinate");
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvalidInput("non-finite coordinate");
  }
  Point p;
  p.dim_ = coords.size();
  p.coords_ = std::move(coords);
  p.binary_ = false;
  return p;
}

PointView Point::view() const {
  return PointView{words_, coords_, dim_, binary_};
}

bool Point::bit(std::size_t i) const {
  return binary_ && i < dim_ && ((words_[i / 64] >> (i % 64)) & 1U);
}

void validate_point(const SpaceKind& space, PointView p) {
  if (p.binary != space.is_binary()) {
    throw InvalidInput("point representation does not match " + space.name() +
                       " space");
  }
  if (p.dim != space.dim()) {
    throw InvalidInput("point dimension " + std::to_string(p.dim) +
                       " does not match space dimension " +
                       std::to_string(space.dim()));
  }
  if (p.binary) {
    if (p.bits.size() != space.words()) {
      throw InvalidInput("packed word count does not match dimension");
    }
    check_binary_padding(p.dim, p.bits);
    return;
  }
  if (p.coords.size() != p.dim) {
    throw InvalidInput("coordinate count does not match dimension");
  }
  const double r = norm(p.coords);
  if (space.type() == SpaceType::kSphere &&
      std::abs(r - 1.0) > kSphereNormTolerance) {
    throw InvalidInput("sphere point norm differs from 1 by more than 1e-9");
  }
  if (space.type() == SpaceType::kBall && r > 1.0 + kBallNormTolerance) {
    throw InvalidInput("ball point norm exceeds 1");
  }
}

// ---------------------------------------------------------------------------
// Dataset

void Dataset::push_back(PointView p) {
  validate_point(space_, p);
  if (p.binary) {
    words_.insert(words_.end(), p.bits.begin(), p.bits.end());
  } else {
    coords_.insert(coords_.end(), p.coords.begin(), p.coords.end());
  }
  ++size_;
}

PointView Dataset::point(std::size_t j) const {
  if (j >= size_) throw InvalidInput("dataset index out of range");
  const std::size_t d = space_.dim();
  if (space_.is_binary()) {
    const std::size_t w = space_.words();
    return PointView{std::span<const std::uint64_t>(words_).subspan(j * w, w),
                     {}, d, true};
  }
  return PointView{{}, std::span<const double>(coords_).subspan(j * d, d), d,
                   false};
}

Point Dataset::copy_point(std::size_t j) const {
  PointView v = point(j);
  if (v.binary) {
    return Point::from_bits(v.dim, {v.bits.begin(), v.bits.end()});
  }
  return Point::from_coords({v.coords.begin(), v.coords.end()});
}

// ---------------------------------------------------------------------------
// Distance

double distance(const SpaceKind& space, PointView x, PointView y,
                DistanceCounter* counter) {
  if (x.binary != space.is_binary() || y.binary != space.is_binary() ||
      x.dim != space.dim() || y.dim != space.dim()) {
    throw InvalidInput("distance: point does not belong to the " +
                       space.name() + " space of dimension " +
                       std::to_string(space.dim()));
  }
  if (counter) counter->increment();
  if (space.is_binary()) {
    std::uint64_t differing = 0;
    for (std::size_t w = 0; w < x.bits.size(); ++w) {
      differing += std::popcount(x.bits[w] ^ y.bits[w]);
    }
    return static_cast<double>(differing) / static_cast<double>(space.dim());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const double diff = x.coords[i] - y.coords[i];
    s += diff * diff;
  }
  const double chord = std::sqrt(s);
  if (space.type() == SpaceType::kSphere &&
      space.metric() == SphereMetric::kGeodesic) {
    return 2.0 * std::asin(std::min(1.0, chord / 2.0));
  }
  return chord;
}

// ---------------------------------------------------------------------------
// Sampling

Point sample_point(const SpaceKind& space, Rng& rng) {
  const std::size_t d = space.dim();
  if (space.is_binary()) {
    std::vector<std::uint64_t> words(space.words());
    for (auto& w : words) w = rng.next();
    if (d % 64 != 0) words.back() &= (std::uint64_t{1} << (d % 64)) - 1;
    return Point::from_bits(d, std::move(words));
  }
  std::vector<double> v(d);
  double r = 0.0;
  while (r == 0.0) {
    for (auto& x : v) x = rng.gaussian();
    r = norm(v);
  }
  double scale = 1.0 / r;
  if (space.type() == SpaceType::kBall) {
    scale *= std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
  }
  for (auto& x : v) x *= scale;
  return Point::from_coords(std::move(v));
}

Dataset sample(const SpaceKind& space, std::size_t n, std::uint64_t seed) {
  Dataset out(space, seed);
  Rng rng(derive_seed(seed, {0x5a3d1e}));
  for (std::size_t j = 0; j < n; ++j) out.push_back(sample_point(space, rng));
  return out;
}

std::vector<std::pair<double, double>> project2d(const Dataset& dataset,
                                                 std::size_t axis_a,
                                                 std::size_t axis_b) {
  const SpaceKind& space = dataset.space();
  if (space.is_binary()) {
    throw InvalidInput("project2d requires a real-vector space");
  }
  if (axis_a >= space.dim() || axis_b >= space.dim()) {
    throw InvalidInput("projection axis out of range");
  }
  if (axis_a == axis_b) throw InvalidInput("projection axes must differ");
  std::vector<std::pair<double, double>> out;
  out.reserve(dataset.size());
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    PointView p = dataset.point(j);
    out.emplace_back(p.coords[axis_a], p.coords[axis_b]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

std::string format_point(const SpaceKind& space, PointView p) {
  validate_point(space, p);
  std::string out;
  if (p.binary) {
    static constexpr char kHex[] = "0123456789abcdef";
    const std::size_t bytes = (p.dim + 7) / 8;
    for (std::size_t b = 0; b < bytes; ++b) {
      unsigned byte = 0;
      for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t bit = b * 8 + i;
        if (bit < p.dim && ((p.bits[bit / 64] >> (bit % 64)) & 1U)) {
          byte |= 0x80U >> i;
        }
      }
      out.push_back(kHex[byte >> 4]);
      out.push_back(kHex[byte & 0xF]);
    }
    return out;
  }
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) out.push_back(' ');
    out += detail::format_double(p.coords[i]);
  }
  return out;
}

Point parse_point(const SpaceKind& space, std::string_view text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) {
    text.remove_suffix(1);
  }
  const std::size_t d = space.dim();
  if (space.is_binary()) {
    if (text.size() != 2 * ((d + 7) / 8)) {
      throw InvalidInput("hex point must have " +
                         std::to_string(2 * ((d + 7) / 8)) + " digits");
    }
    std::vector<std::uint64_t> words(space.words(), 0);
    for (std::size_t c = 0; c < text.size(); ++c) {
      const char ch = text[c];
      unsigned nibble;
      if (ch >= '0' && ch <= '9') {
        nibble = ch - '0';
      } else if (ch >= 'a' && ch <= 'f') {
        nibble = ch - 'a' + 10;
      } else {
        throw InvalidInput("hex point must use lowercase hex digits");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (!((nibble >> (3 - i)) & 1U)) continue;
        const std::size_t bit = c * 4 + i;
        if (bit >= d) throw InvalidInput("hex point has nonzero padding bits");
        words[bit / 64] |= std::uint64_t{1} << (bit % 64);
      }
    }
    Point p = Point::from_bits(d, std::move(words));
    validate_point(space, p.view());
    return p;
  }
  auto tokens = detail::split_tokens(text);
  if (tokens.size() != d) {
    throw InvalidInput("expected " + std::to_string(d) + " coordinates, got " +
                       std::to_string(tokens.size()));
  }
  std::vector<double> coords;
  coords.reserve(d);
  for (auto t : tokens) coords.push_back(detail::parse_double(t));
  Point p = Point::from_coords(std::move(coords));
  validate_point(space, p.view());
  return p;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const SpaceKind& space = dataset.space();
  nlohmann::ordered_json header;
  header["format_version"] = 1;
  header["kind"] = space.name();
  header["d"] = space.dim();
  header["n"] = dataset.size();
  header["seed"] = dataset.seed();
  header["metric_variant"] = space.metric_name();
  out << header.dump() << '\n';
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    out << format_point(space, dataset.point(j)) << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("dataset: missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("dataset: bad header: ") + e.what());
  }
  if (header.value("format_version", 1) != 1) {
    throw InvalidInput("dataset: unsupported format_version");
  }
  std::size_t n = 0;
  SpaceKind space = SpaceKind::hamming(1);
  std::uint64_t seed = 0;
  try {
    const auto metric = header.value("metric_variant", std::string("euclidean"));
    space = SpaceKind::parse(header.at("kind").get<std::string>(),
                             header.at("d").get<std::size_t>(), metric);
    n = header.at("n").get<std::size_t>();
    seed = header.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("dataset: bad header: ") + e.what());
  }
  Dataset out(space, seed);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(in, line)) {
      throw InvalidInput("dataset: expected " + std::to_string(n) +
                         " points, found " + std::to_string(j));
    }
    out.push_back(parse_point(space, line));
  }
  return out;
}

void save_dataset(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(out, dataset);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_dataset(in);
}

}  // namespace pivotlab
