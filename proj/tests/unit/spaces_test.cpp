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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pivotlab/error.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/spaces.hpp"

namespace pivotlab {
namespace {

using testing::reference_distance;

TEST(Distance, HammingHandCounts) {
  const SpaceKind h3 = SpaceKind::hamming(3);
  EXPECT_EQ(distance(h3, Point::from_bit_string("101"),
                     Point::from_bit_string("101")),
            0.0);
  EXPECT_EQ(distance(h3, Point::from_bit_string("000"),
                     Point::from_bit_string("111")),
            1.0);
  EXPECT_EQ(distance(SpaceKind::hamming(4), Point::from_bit_string("1010"),
                     Point::from_bit_string("1001")),
            0.5);
}

TEST(Distance, SphereAntipodes) {
  const SpaceKind s = SpaceKind::sphere(2);
  const Point x = Point::from_coords({1.0, 0.0});
  const Point y = Point::from_coords({-1.0, 0.0});
  EXPECT_DOUBLE_EQ(distance(s, x, y), 2.0);
  const SpaceKind g = SpaceKind::sphere(2, SphereMetric::kGeodesic);
  EXPECT_NEAR(distance(g, x, y), M_PI, 1e-12);
}

TEST(Distance, WideHammingCrossesWordBoundary) {
  std::string a(130, '0');
  std::string b(130, '0');
  b[0] = b[63] = b[64] = b[129] = '1';
  EXPECT_DOUBLE_EQ(distance(SpaceKind::hamming(130), Point::from_bit_string(a),
                            Point::from_bit_string(b)),
                   4.0 / 130.0);
}

TEST(Distance, CounterIncrementsOncePerCall) {
  const SpaceKind s = SpaceKind::hamming(8);
  DistanceCounter c;
  const Point x = Point::from_bit_string("00000000");
  for (int i = 0; i < 7; ++i) distance(s, x, x, &c);
  EXPECT_EQ(c.count(), 7u);
}

TEST(Distance, DimensionMismatchRejected) {
  EXPECT_THROW(distance(SpaceKind::hamming(4), Point::from_bit_string("1010"),
                        Point::from_bit_string("101")),
               InvalidInput);
  EXPECT_THROW(distance(SpaceKind::ball(3), Point::from_coords({0.1, 0.2}),
                        Point::from_coords({0.1, 0.2})),
               InvalidInput);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
  const SpaceKind spaces[] = {SpaceKind::hamming(37), SpaceKind::hamming(200),
                              SpaceKind::sphere(5),
                              SpaceKind::sphere(5, SphereMetric::kGeodesic),
                              SpaceKind::ball(7)};
  std::uint64_t salt = 0;
  for (const SpaceKind& space : spaces) {
    Rng rng(derive_seed(99, {salt++}));
    for (int t = 0; t < 2000; ++t) {
      const Point x = sample_point(space, rng);
      const Point y = sample_point(space, rng);
      const Point z = sample_point(space, rng);
      const double xy = distance(space, x, y);
      const double yz = distance(space, y, z);
      const double xz = distance(space, x, z);
      ASSERT_EQ(xy, distance(space, y, x));
      ASSERT_EQ(distance(space, x, x), 0.0);
      ASSERT_GE(xy, 0.0);
      ASSERT_NEAR(xy, reference_distance(space, x, y), 1e-12);
      if (space.is_binary()) {
        // Normalized Hamming values are m/d, so integer counts decide.
        const double d = static_cast<double>(space.dim());
        ASSERT_LE(std::llround(xz * d), std::llround(xy * d) + std::llround(yz * d));
        if (x != y) ASSERT_GT(xy, 0.0);
      } else {
        ASSERT_LE(xz, xy + yz + 1e-12);
      }
    }
  }
}

TEST(Sample, EmptyWhenNZero) {
  EXPECT_TRUE(sample(SpaceKind::sphere(4), 0, 1).empty());
}

TEST(Sample, HammingBitFrequenciesWithinThreeSigma) {
  const Dataset data = sample(SpaceKind::hamming(8), 10000, 42);
  ASSERT_EQ(data.size(), 10000u);
  const double margin = 3.0 * std::sqrt(0.25 / 10000.0);
  for (std::size_t i = 0; i < 8; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data.copy_point(j).bit(i)) ++ones;
    }
    EXPECT_NEAR(ones / 10000.0, 0.5, margin) << "bit " << i;
  }
}

TEST(Sample, BallSecondMomentMatchesAnalyticValue) {
  // For the uniform ball E|x|^2 = d / (d + 2).
  const std::size_t d = 2;
  const Dataset data = sample(SpaceKind::ball(d), 100000, 5);
  double sum = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    for (double c : data.point(j).coords) sum += c * c;
  }
  const double expected = static_cast<double>(d) / (d + 2.0);
  EXPECT_NEAR(sum / data.size(), expected, 0.02 * expected);
}

TEST(Sample, SpherePointsHaveUnitNorm) {
  const Dataset data = sample(SpaceKind::sphere(13), 500, 8);
  for (std::size_t j = 0; j < data.size(); ++j) {
    double s = 0.0;
    for (double c : data.point(j).coords) s += c * c;
    ASSERT_NEAR(std::sqrt(s), 1.0, 1e-12);
  }
}

TEST(Sample, SameSeedSameDataset) {
  for (const SpaceKind& s :
       {SpaceKind::hamming(70), SpaceKind::sphere(6), SpaceKind::ball(3)}) {
    EXPECT_EQ(sample(s, 300, 11), sample(s, 300, 11));
    EXPECT_FALSE(sample(s, 300, 11) == sample(s, 300, 12));
  }
}

TEST(Project2d, CircleIsUnchanged) {
  const Dataset data = sample(SpaceKind::sphere(2), 200, 3);
  for (const auto& [x, y] : project2d(data, 0, 1)) {
    EXPECT_NEAR(std::hypot(x, y), 1.0, 1e-12);
  }
}

TEST(Project2d, MedianNormScalesLikeRootTwoOverD) {
  const Dataset data = sample(SpaceKind::sphere(100), 1000, 21);
  std::vector<double> norms;
  for (const auto& [x, y] : project2d(data, 0, 1)) norms.push_back(std::hypot(x, y));
  std::nth_element(norms.begin(), norms.begin() + 500, norms.end());
  const double expected = std::sqrt(2.0 / 100.0);
  EXPECT_NEAR(norms[500], expected, 0.2 * expected);
}

TEST(Project2d, EmptyAndBadAxes) {
  EXPECT_TRUE(project2d(Dataset(SpaceKind::sphere(3), 0), 0, 1).empty());
  const Dataset data = sample(SpaceKind::sphere(3), 4, 1);
  EXPECT_THROW(project2d(data, 0, 3), InvalidInput);
  EXPECT_THROW(project2d(sample(SpaceKind::hamming(3), 2, 1), 0, 1),
               InvalidInput);
}

TEST(Validation, RejectsPointsOffTheSpace) {
  EXPECT_THROW(validate_point(SpaceKind::sphere(2),
                              Point::from_coords({0.5, 0.5}).view()),
               InvalidInput);
  EXPECT_THROW(validate_point(SpaceKind::ball(2),
                              Point::from_coords({0.9, 0.9}).view()),
               InvalidInput);
  EXPECT_NO_THROW(validate_point(SpaceKind::ball(2),
                                 Point::from_coords({0.6, 0.8}).view()));
  // Padding bits beyond d must stay clear.
  EXPECT_THROW(Point::from_bits(3, {0xF}), InvalidInput);
  EXPECT_THROW(Point::from_bit_string("10x1"), InvalidInput);
}

TEST(SpaceKind, ParseAndDiameter) {
  EXPECT_EQ(SpaceKind::parse("hamming", 8), SpaceKind::hamming(8));
  EXPECT_EQ(SpaceKind::parse("sphere", 3, "geodesic"),
            SpaceKind::sphere(3, SphereMetric::kGeodesic));
  EXPECT_THROW(SpaceKind::parse("torus", 3), InvalidInput);
  EXPECT_THROW(SpaceKind::hamming(0), InvalidInput);
  EXPECT_DOUBLE_EQ(SpaceKind::hamming(5).diameter(), 1.0);
  EXPECT_DOUBLE_EQ(SpaceKind::sphere(5).diameter(), 2.0);
  EXPECT_DOUBLE_EQ(SpaceKind::ball(5).diameter(), 2.0);
  EXPECT_NEAR(SpaceKind::sphere(5, SphereMetric::kGeodesic).diameter(), M_PI,
              1e-15);
}

TEST(DatasetIo, RoundTripIsExact) {
  for (const SpaceKind& s : {SpaceKind::hamming(77), SpaceKind::sphere(4),
                             SpaceKind::sphere(3, SphereMetric::kGeodesic),
                             SpaceKind::ball(5)}) {
    const Dataset data = sample(s, 64, 17);
    std::stringstream buf;
    write_dataset(buf, data);
    const Dataset back = read_dataset(buf);
    EXPECT_EQ(back, data) << s.name();
  }
}

TEST(DatasetIo, MalformedInputRejected) {
  std::stringstream bad("not a header\n");
  EXPECT_THROW(read_dataset(bad), Error);
  EXPECT_THROW(load_dataset("/nonexistent/dir/data.txt"), IoError);
}

TEST(PointText, FormatParseRoundTrip) {
  const SpaceKind h = SpaceKind::hamming(10);
  const Point p = Point::from_bit_string("1100101001");
  EXPECT_EQ(parse_point(h, format_point(h, p.view())), p);
  const SpaceKind b = SpaceKind::ball(3);
  const Point x = Point::from_coords({0.1, -0.25, 1.0 / 3.0});
  EXPECT_EQ(parse_point(b, format_point(b, x.view())), x);
  EXPECT_THROW(parse_point(b, "0.1 0.2"), InvalidInput);
}

}  // namespace
}  // namespace pivotlab
