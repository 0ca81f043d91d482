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

#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "pivotlab/error.hpp"
#include "pivotlab/vc_bounds.hpp"

namespace pivotlab {
namespace {

TEST(Growth, BothRegimes) {
  EXPECT_NEAR(growth_bound(5, 5), 5.0 * std::log(2.0), 1e-12);
  EXPECT_NEAR(growth_bound(5, 5), 3.4657, 1e-4);
  EXPECT_NEAR(growth_bound(10, 5), 5.0 * (1.0 + std::log(2.0)), 1e-12);
  EXPECT_NEAR(growth_bound(1, 5), std::log(2.0), 1e-15);
}

TEST(Growth, ContinuousAtTheCrossover) {
  for (double delta : {1.0, 3.0, 17.0}) {
    const auto n = static_cast<std::size_t>(delta);
    EXPECT_NEAR(growth_bound(n, delta), delta * std::log(2.0), 1e-12);
    EXPECT_GE(growth_bound(n + 1, delta), growth_bound(n, delta));
  }
}

TEST(Union, Additive) {
  EXPECT_EQ(union_vc_bound(4, 4), 9.0);
  EXPECT_EQ(union_vc_bound(0, 0), 1.0);
  EXPECT_EQ(union_vc_bound(5, 7), 13.0);
}

TEST(Intersection, Values) {
  EXPECT_NEAR(intersection_vc_bound(5, 2), 20.0 * std::log(6.0), 1e-12);
  EXPECT_NEAR(intersection_vc_bound(5, 2), 35.835, 1e-3);
  EXPECT_NEAR(intersection_vc_bound(7, 1), 14.0 * std::log(3.0), 1e-12);
}

TEST(Intersection, ReproducesShellFamily) {
  for (std::size_t d = 1; d <= 8; ++d) {
    for (std::size_t k = 1; k <= 8; ++k) {
      const double shells = intersection_vc_bound(2.0 * d + 3.0, 2 * k);
      const double direct = k * (8.0 * d + 12.0) * std::log(6.0 * k);
      EXPECT_NEAR(shells, direct, 1e-9 * direct);
      EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kL2, d, k}), direct,
                  1e-9 * direct);
    }
  }
}

TEST(PivotFamily, Values) {
  EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kL2, 1, 1}), 20.0 * std::log(6.0),
              1e-12);
  EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kLinf, 3, 2}),
              104.0 * std::log(12.0), 1e-9);
  EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kLinf, 3, 2}), 258.43, 0.01);
  EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kHamming, 16, 4}), 2084.8, 0.1);
  EXPECT_NEAR(pivot_family_vc_bound({VcFamily::kHamming, 16, 4}),
              656.0 * std::log(24.0), 1e-9);
}

TEST(PivotFamily, MonotoneInDAndK) {
  for (auto f : {VcFamily::kL2, VcFamily::kLinf, VcFamily::kHamming}) {
    for (std::size_t d = 1; d < 20; ++d) {
      for (std::size_t k = 1; k < 20; ++k) {
        const double v = pivot_family_vc_bound({f, d, k});
        EXPECT_LT(v, pivot_family_vc_bound({f, d + 1, k}));
        EXPECT_LT(v, pivot_family_vc_bound({f, d, k + 1}));
      }
    }
    EXPECT_EQ(parse_vc_family(to_string(f)), f);
  }
  EXPECT_THROW(pivot_family_vc_bound({VcFamily::kL2, 0, 1}), InvalidInput);
  EXPECT_THROW(parse_vc_family("l1"), Error);
}

TEST(Convergence, LargeSample) {
  const double expo = vc_convergence_exponent(1000000, 1.0, 0.01);
  EXPECT_NEAR(expo, -84.47, 0.05);
  const double hand = (1.0 + std::log(2e6)) - std::pow(0.01 - 1e-6, 2) * 1e6;
  EXPECT_NEAR(expo, hand, 1e-9);
  EXPECT_NEAR(vc_convergence_bound(1000000, 1.0, 0.01), 4.0 * std::exp(expo),
              1e-45);
  EXPECT_FALSE(is_vacuous(vc_convergence_bound(1000000, 1.0, 0.01)));
}

TEST(Convergence, SmallSampleIsVacuous) {
  EXPECT_NEAR(vc_convergence_exponent(1000, 10.0, 0.1), 53.18, 0.01);
  EXPECT_TRUE(is_vacuous(vc_convergence_bound(1000, 10.0, 0.1)));
  EXPECT_GT(vc_convergence_bound(1000, 10.0, 0.1), 4.0);
}

TEST(Convergence, EventuallyBelowOne) {
  for (double delta : {1.0, 10.0, 100.0}) {
    for (double eps : {0.5, 0.2, 0.1}) {
      std::size_t n = 16;
      while (vc_convergence_bound(n, delta, eps) >= 1.0) {
        n *= 2;
        ASSERT_LT(n, std::size_t{1} << 40);
      }
    }
  }
}

TEST(SampleSize, Values) {
  const double ln = 512.0 * (10.0 * std::log(4.0 * std::exp(2.0)) + std::log(80.0));
  EXPECT_EQ(sample_size_bound(10, 0.5, 0.1), static_cast<std::uint64_t>(std::ceil(ln)));
  EXPECT_NEAR(static_cast<double>(sample_size_bound(10, 0.5, 0.1)), 19582.0, 1.0);
  EXPECT_EQ(sample_size_bound(1, 0.5, 0.5), 3154u);
  const double lg = 512.0 * (10.0 * std::log2(4.0 * std::exp(2.0)) + std::log2(80.0));
  EXPECT_EQ(sample_size_bound(10, 0.5, 0.1, LogBase::kBinary),
            static_cast<std::uint64_t>(std::ceil(lg)));
}

TEST(SampleSize, ConsistentWithConvergenceBound) {
  for (double delta : {1.0, 5.0, 20.0}) {
    for (double eps : {0.1, 0.25, 0.5}) {
      for (double eta : {0.01, 0.05, 0.1}) {
        const std::uint64_t n = sample_size_bound(delta, eps, eta);
        EXPECT_LE(vc_convergence_bound(n, delta, eps), 1.01 * eta)
            << delta << " " << eps << " " << eta;
      }
    }
  }
}

TEST(SampleSize, RejectsOutOfRange) {
  EXPECT_THROW(sample_size_bound(1, 0.0, 0.1), InvalidInput);
  EXPECT_THROW(sample_size_bound(1, 0.5, 1.5), InvalidInput);
}

}  // namespace
}  // namespace pivotlab
