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

#include "pivotlab/vc_bounds.hpp"

#include <cmath>
#include <numbers>

#include "pivotlab/error.hpp"

namespace pivotlab {

namespace {

void require_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidInput(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

std::string to_string(VcFamily f) {
  switch (f) {
    case VcFamily::kL2:
      return "L2";
    case VcFamily::kLinf:
      return "Linf";
    case VcFamily::kHamming:
      return "Hamming";
  }
  return "";
}

VcFamily parse_vc_family(std::string_view name) {
  if (name == "L2" || name == "l2") return VcFamily::kL2;
  if (name == "Linf" || name == "linf") return VcFamily::kLinf;
  if (name == "Hamming" || name == "hamming") return VcFamily::kHamming;
  throw InvalidInput("unknown VC family '" + std::string(name) + "'");
}

double growth_bound(std::size_t n, double delta) {
  if (n < 1) throw InvalidInput("growth_bound: n must be >= 1");
  if (!(delta >= 1.0)) throw InvalidInput("growth_bound: delta must be >= 1");
  const double nn = static_cast<double>(n);
  if (nn <= delta) return nn * std::numbers::ln2;
  return delta * (1.0 + std::log(nn / delta));
}

double union_vc_bound(double delta_a, double delta_b) {
  if (!(delta_a >= 0.0) || !(delta_b >= 0.0)) {
    throw InvalidInput("union_vc_bound: deltas must be >= 0");
  }
  return delta_a + delta_b + 1.0;
}

double intersection_vc_bound(double delta, std::size_t k) {
  if (!(delta >= 1.0)) {
    throw InvalidInput("intersection_vc_bound: delta must be >= 1");
  }
  if (k < 1) throw InvalidInput("intersection_vc_bound: k must be >= 1");
  const double kk = static_cast<double>(k);
  return 2.0 * delta * kk * std::log(3.0 * kk);
}

double pivot_family_vc_bound(const VcBoundInput& input) {
  if (input.d < 1 || input.k < 1) {
    throw InvalidInput("pivot_family_vc_bound: d and k must be >= 1");
  }
  const double d = static_cast<double>(input.d);
  const double k = static_cast<double>(input.k);
  double per_pivot = 0.0;
  switch (input.family) {
    case VcFamily::kL2:
      per_pivot = 8.0 * d + 12.0;
      break;
    case VcFamily::kLinf:
      per_pivot = 16.0 * d + 4.0;
      break;
    case VcFamily::kHamming:
      per_pivot = 8.0 * d + 8.0 * std::log2(d) + 4.0;
      break;
  }
  return k * per_pivot * std::log(6.0 * k);
}

double vc_convergence_exponent(std::size_t n, double delta, double eps) {
  if (n < 1) throw InvalidInput("vc_convergence_bound: n must be >= 1");
  if (!(delta >= 1.0)) {
    throw InvalidInput("vc_convergence_bound: delta must be >= 1");
  }
  require_unit_open(eps, "vc_convergence_bound: eps");
  const double nn = static_cast<double>(n);
  const double capacity = delta * (1.0 + std::log(2.0 * nn / delta)) / nn;
  const double margin = eps - 1.0 / nn;
  return (capacity - margin * margin) * nn;
}

double vc_convergence_bound(std::size_t n, double delta, double eps) {
  return 4.0 * std::exp(vc_convergence_exponent(n, delta, eps));
}

std::uint64_t sample_size_bound(double delta, double eps, double eta,
                                LogBase base) {
  if (!(delta >= 1.0)) {
    throw InvalidInput("sample_size_bound: delta must be >= 1");
  }
  require_unit_open(eps, "sample_size_bound: eps");
  require_unit_open(eta, "sample_size_bound: eta");
  auto log = [base](double x) {
    return base == LogBase::kNatural ? std::log(x) : std::log2(x);
  };
  const double e2 = std::exp(2.0);
  const double n = 128.0 / (eps * eps) *
                   (delta * log(2.0 * e2 / eps) + log(8.0 / eta));
  return static_cast<std::uint64_t>(std::ceil(n));
}

}  // namespace pivotlab
