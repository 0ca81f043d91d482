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

#ifndef PIVOTLAB_VC_BOUNDS_HPP_
#define PIVOTLAB_VC_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace pivotlab {

// Closed-form VC-theoretic bounds for the family of pivot discard sets
// {omega : rho_k(q, omega) > r}.

enum class VcFamily { kL2, kLinf, kHamming };

std::string to_string(VcFamily f);
VcFamily parse_vc_family(std::string_view name);

struct VcBoundInput {
  VcFamily family = VcFamily::kL2;
  std::size_t d = 1;
  std::size_t k = 1;
};

// n ln 2 when n <= delta, otherwise delta (1 + ln(n / delta)).
double growth_bound(std::size_t n, double delta);

// VC dimension of a union of two families: delta_a + delta_b + 1.
double union_vc_bound(double delta_a, double delta_b);

// VC dimension of k-fold intersections: 2 delta k ln(3k).
double intersection_vc_bound(double delta, std::size_t k);

//   L2       k (8d + 12) ln(6k)
//   Linf     k (16d + 4) ln(6k)
//   Hamming  k (8d + 8 log2 d + 4) ln(6k)
double pivot_family_vc_bound(const VcBoundInput& input);

// Exponent of the uniform-convergence bound,
//   (delta (1 + ln(2n / delta)) / n - (eps - 1/n)^2) n.
double vc_convergence_exponent(std::size_t n, double delta, double eps);

// 4 exp(vc_convergence_exponent). Unclamped; >= 1 means vacuous.
double vc_convergence_bound(std::size_t n, double delta, double eps);

inline bool is_vacuous(double probability_bound) {
  return probability_bound >= 1.0;
}

enum class LogBase { kNatural, kBinary };

// ceil((128 / eps^2) (delta log(2 e^2 / eps) + log(8 / eta))). Natural log by
// default; kBinary exists for sensitivity checks.
std::uint64_t sample_size_bound(double delta, double eps, double eta,
                                LogBase base = LogBase::kNatural);

}  // namespace pivotlab

#endif  // PIVOTLAB_VC_BOUNDS_HPP_
