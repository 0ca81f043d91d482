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

#ifndef PIVOTLAB_HARNESS_HPP_
#define PIVOTLAB_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pivotlab/concentration.hpp"
#include "pivotlab/pivot_index.hpp"
#include "pivotlab/report.hpp"
#include "pivotlab/spaces.hpp"
#include "pivotlab/vc_bounds.hpp"

namespace pivotlab {

struct ScheduleCell {
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t k = 0;

  friend bool operator==(const ScheduleCell&, const ScheduleCell&) = default;
};

// Hamming cells (d, n) = (16, 16), (64, 256), (144, 4096), (256, 65536):
// n = 2^sqrt(d), so d = (log2 n)^2, with k = ceil(log2 n) pivots.
std::vector<ScheduleCell> default_schedule();

enum class RadiusPolicy { kNearestNeighbour, kFixed };

// Uncalibrated default for the unit ball; matches the sphere exponent.
inline constexpr LevyParams kBallLevyParams{1.0, 0.5};

struct ExperimentConfig {
  std::string space = "hamming";
  std::string metric = "euclidean";
  std::vector<ScheduleCell> schedule = default_schedule();
  PivotStrategy strategy = PivotStrategy::kRandom;
  std::size_t queries_per_cell = 200;
  RadiusPolicy radius_policy = RadiusPolicy::kNearestNeighbour;
  double fixed_radius = 0.0;
  // Optional per-cell concentration estimate.
  std::vector<double> epsilons;
  std::size_t alpha_samples = 10000;
  std::uint64_t seed = 0;
  // Pairs used for the cell's median distance and intrinsic dimension.
  std::size_t n_pairs = 10000;
  // Overrides the default Levy constants of the space (cube and ball cells).
  std::optional<LevyParams> levy;
  double vc_eps = 0.5;
  double vc_eta = 0.1;
  std::string output_dir = ".";
};

// JSON schema:
//   {"format_version":1, "space":"hamming", "metric":"euclidean",
//    "schedule":[{"d":16,"n":16,"k":4}, ...], "strategy":"random",
//    "queries_per_cell":200, "radius":{"policy":"nn"} | {"policy":"fixed","r":x},
//    "epsilons":[...], "alpha_samples":10000, "seed":42, "n_pairs":10000,
//    "levy":{"C":1,"c":2}, "vc_eps":0.5, "vc_eta":0.1, "output_dir":"out"}
// Everything but "seed" is optional. Throws ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text);
std::string to_json(const ExperimentConfig& config);

// Throws ConfigError on an infeasible config (k > n, n = 0, unknown space,
// sphere with d < 2, ...).
void validate_config(const ExperimentConfig& config);

// Levy constants used for a space's analytic companion.
LevyParams levy_params_for(const ExperimentConfig& config);

struct QueryRecord {
  double radius = 0.0;
  // Oracle nearest-neighbour distance; not part of the counted cost.
  double nn_distance = 0.0;
  std::size_t discarded = 0;
  std::uint64_t cost = 0;
  std::size_t matches = 0;
};

struct CellAggregates {
  double median_cost = 0.0;
  double mean_cost = 0.0;
  double median_cost_over_n = 0.0;
  // Median over queries of |C_q| / n, i.e. of mu_#(C_q).
  double median_pruned_fraction = 0.0;
  // Median over queries of 1 - |C_q| / n.
  double median_unpruned_mass = 0.0;
  double median_radius = 0.0;
  // m_d: median oracle nearest-neighbour distance.
  double nn_median = 0.0;
};

// Recomputes the aggregates from per-query records of a cell of size n.
CellAggregates aggregate_queries(const std::vector<QueryRecord>& queries,
                                 std::size_t n);

struct CellReport {
  ScheduleCell cell;
  std::string space;
  std::string metric;
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint64_t build_cost = 0;
  std::vector<QueryRecord> queries;
  CellAggregates aggregates;

  // Analytic companions, evaluated at the median radius.
  std::string alpha_source;  // "sphere_closed_form" or "levy"
  LevyParams levy;
  double alpha_half_radius = 0.0;
  double pruning_bound = 0.0;
  std::optional<double> vc_dimension_bound;
  std::optional<std::uint64_t> sample_size_bound;

  double pair_distance_median = 0.0;  // M_d
  double intrinsic_dimension = 0.0;   // d~
  std::vector<double> epsilons;
  std::vector<double> alpha_hat;
};

std::vector<CellReport> run_curse_experiment(const ExperimentConfig& config);

struct ConcentrationRow {
  std::size_t d = 0;
  double eps = 0.0;
  double alpha_hat = 0.0;
  double bound = 0.0;
};

// Sphere rows carry exp(-(d-1) eps^2 / 2); cube and ball rows the Levy bound.
std::vector<ConcentrationRow> run_concentration_experiment(
    const SpaceKind& space_template, const std::vector<std::size_t>& dims,
    const std::vector<double>& epsilons, std::size_t n_samples,
    std::uint64_t seed);

struct ProjectionSeries {
  std::size_t d = 0;
  std::vector<std::pair<double, double>> points;
};

// Samples n sphere points per d and keeps coordinates (0, 1).
std::vector<ProjectionSeries> run_projection_figure(
    const std::vector<std::size_t>& dims, std::size_t n, std::uint64_t seed);

// Report rows. Aggregates go under experiment "curse", per-query rows under
// "curse_queries".
std::vector<ReportRecord> cell_records(const CellReport& cell);
std::vector<ReportRecord> query_records(const CellReport& cell);
std::vector<ReportRecord> concentration_records(
    const std::vector<ConcentrationRow>& rows, const SpaceKind& space_template,
    std::size_t n_samples, std::uint64_t seed);
std::vector<ReportRecord> projection_records(
    const std::vector<ProjectionSeries>& series, std::uint64_t seed);
std::vector<ReportRecord> vc_records(const VcBoundInput& input, std::size_t n,
                                     double eps, double eta);

// Runs a named experiment ("curse", "concentration", "projection", "vc") from
// its JSON config and writes the report. For "curse", output is a directory
// receiving curse.<ext> and curse_queries.<ext>; otherwise it is a file path.
void run_experiment(std::string_view name, std::string_view config_json,
                    const std::string& output, ReportFormat format);

}  // namespace pivotlab

#endif  // PIVOTLAB_HARNESS_HPP_
