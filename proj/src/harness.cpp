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

#include "pivotlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <set>

#include <json.hpp>

#include "pivotlab/error.hpp"

namespace pivotlab {

namespace {

using nlohmann::json;

// Stream roles under (master seed, cell index).
enum : std::uint64_t {
  kDatasetStream = 0,
  kPivotStream = 1,
  kQueryStream = 2,
  kPairStream = 3,
  kAlphaStream = 4,
};

std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  allowed.insert("format_version");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (j.contains("format_version") && j.at("format_version") != 1) {
    throw ConfigError("unsupported format_version");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::uint64_t require_seed(const json& j) {
  if (!j.contains("seed")) throw ConfigError("config requires a 'seed'");
  return get_or<std::uint64_t>(j, "seed", 0);
}

SpaceKind space_for(const std::string& space, std::size_t d,
                    const std::string& metric) {
  try {
    return SpaceKind::parse(space, d, metric);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

std::string query_label(std::size_t i, const char* field) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "q%06zu.%s", i, field);
  return buf;
}

double clamp_probability(double p) { return std::min(1.0, p); }

}  // namespace

std::vector<ScheduleCell> default_schedule() {
  std::vector<ScheduleCell> cells;
  for (std::size_t root : {4, 8, 12, 16}) {
    const std::size_t n = std::size_t{1} << root;
    cells.push_back({root * root, n, ceil_log2(n)});
  }
  return cells;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  reject_unknown_keys(j, {"space", "metric", "schedule", "strategy",
                          "queries_per_cell", "radius", "epsilons",
                          "alpha_samples", "seed", "n_pairs", "levy", "vc_eps",
                          "vc_eta", "output_dir"});
  ExperimentConfig c;
  c.seed = require_seed(j);
  c.space = get_or<std::string>(j, "space", c.space);
  c.metric = get_or<std::string>(j, "metric", c.metric);
  if (j.contains("schedule")) {
    c.schedule.clear();
    for (const auto& cell : j.at("schedule")) {
      try {
        c.schedule.push_back({cell.at("d").get<std::size_t>(),
                              cell.at("n").get<std::size_t>(),
                              cell.at("k").get<std::size_t>()});
      } catch (const json::exception& e) {
        throw ConfigError(std::string("schedule cell: ") + e.what());
      }
    }
  }
  try {
    c.strategy = parse_pivot_strategy(
        get_or<std::string>(j, "strategy", to_string(c.strategy)));
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  c.queries_per_cell = get_or<std::size_t>(j, "queries_per_cell",
                                           c.queries_per_cell);
  if (j.contains("radius")) {
    const json& r = j.at("radius");
    const auto policy = get_or<std::string>(r, "policy", "nn");
    if (policy == "nn") {
      c.radius_policy = RadiusPolicy::kNearestNeighbour;
    } else if (policy == "fixed") {
      c.radius_policy = RadiusPolicy::kFixed;
      if (!r.contains("r")) throw ConfigError("fixed radius policy needs 'r'");
      c.fixed_radius = get_or<double>(r, "r", 0.0);
    } else {
      throw ConfigError("unknown radius policy '" + policy + "'");
    }
  }
  c.epsilons = get_or<std::vector<double>>(j, "epsilons", c.epsilons);
  c.alpha_samples = get_or<std::size_t>(j, "alpha_samples", c.alpha_samples);
  c.n_pairs = get_or<std::size_t>(j, "n_pairs", c.n_pairs);
  if (j.contains("levy")) {
    const json& l = j.at("levy");
    c.levy = LevyParams{get_or<double>(l, "C", 1.0), get_or<double>(l, "c", 1.0)};
  }
  c.vc_eps = get_or<double>(j, "vc_eps", c.vc_eps);
  c.vc_eta = get_or<double>(j, "vc_eta", c.vc_eta);
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
  validate_config(c);
  return c;
}

std::string to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["space"] = c.space;
  j["metric"] = c.metric;
  j["schedule"] = json::array();
  for (const auto& cell : c.schedule) {
    j["schedule"].push_back({{"d", cell.d}, {"n", cell.n}, {"k", cell.k}});
  }
  j["strategy"] = to_string(c.strategy);
  j["queries_per_cell"] = c.queries_per_cell;
  if (c.radius_policy == RadiusPolicy::kFixed) {
    j["radius"] = {{"policy", "fixed"}, {"r", c.fixed_radius}};
  } else {
    j["radius"] = {{"policy", "nn"}};
  }
  j["epsilons"] = c.epsilons;
  j["alpha_samples"] = c.alpha_samples;
  j["seed"] = c.seed;
  j["n_pairs"] = c.n_pairs;
  if (c.levy) j["levy"] = {{"C", c.levy->C}, {"c", c.levy->c}};
  j["vc_eps"] = c.vc_eps;
  j["vc_eta"] = c.vc_eta;
  j["output_dir"] = c.output_dir;
  return j.dump();
}

void validate_config(const ExperimentConfig& c) {
  if (c.schedule.empty()) throw ConfigError("schedule is empty");
  for (const auto& cell : c.schedule) {
    const std::string where = "cell (d=" + std::to_string(cell.d) +
                              ", n=" + std::to_string(cell.n) +
                              ", k=" + std::to_string(cell.k) + "): ";
    if (cell.n < 1) throw ConfigError(where + "n must be >= 1");
    if (cell.k > cell.n) throw ConfigError(where + "k exceeds n");
    const SpaceKind space = space_for(c.space, std::max<std::size_t>(cell.d, 1),
                                      c.metric);
    if (cell.d < 1) throw ConfigError(where + "d must be >= 1");
    if (space.type() == SpaceType::kSphere && cell.d < 2) {
      throw ConfigError(where + "sphere cells need d >= 2");
    }
  }
  if (c.queries_per_cell < 1) throw ConfigError("queries_per_cell must be >= 1");
  if (c.radius_policy == RadiusPolicy::kFixed && !(c.fixed_radius >= 0.0)) {
    throw ConfigError("fixed radius must be >= 0");
  }
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (!(c.epsilons[i] >= 0.0) || (i && c.epsilons[i] < c.epsilons[i - 1])) {
      throw ConfigError("epsilons must be non-negative and ascending");
    }
  }
  if (!c.epsilons.empty() && c.alpha_samples < 100) {
    throw ConfigError("alpha_samples must be >= 100");
  }
  if (c.n_pairs < 100) throw ConfigError("n_pairs must be >= 100");
  if (c.levy && (!(c.levy->C > 0.0) || !(c.levy->c > 0.0))) {
    throw ConfigError("levy constants must be positive");
  }
  if (!(c.vc_eps > 0.0 && c.vc_eps < 1.0) ||
      !(c.vc_eta > 0.0 && c.vc_eta < 1.0)) {
    throw ConfigError("vc_eps and vc_eta must lie in (0, 1)");
  }
}

LevyParams levy_params_for(const ExperimentConfig& config) {
  if (config.levy) return *config.levy;
  return config.space == "ball" ? kBallLevyParams : kHammingLevyParams;
}

CellAggregates aggregate_queries(const std::vector<QueryRecord>& queries,
                                 std::size_t n) {
  if (queries.empty()) throw InvalidInput("aggregate_queries: no queries");
  const double nn = static_cast<double>(n);
  std::vector<double> cost, cost_over_n, pruned, unpruned, radius, nearest;
  double cost_sum = 0.0;
  for (const auto& q : queries) {
    const double c = static_cast<double>(q.cost);
    const double p = static_cast<double>(q.discarded) / nn;
    cost.push_back(c);
    cost_over_n.push_back(c / nn);
    pruned.push_back(p);
    unpruned.push_back(1.0 - p);
    radius.push_back(q.radius);
    nearest.push_back(q.nn_distance);
    cost_sum += c;
  }
  CellAggregates a;
  a.median_cost = lower_median(cost);
  a.mean_cost = cost_sum / static_cast<double>(queries.size());
  a.median_cost_over_n = lower_median(cost_over_n);
  a.median_pruned_fraction = lower_median(pruned);
  a.median_unpruned_mass = lower_median(unpruned);
  a.median_radius = lower_median(radius);
  a.nn_median = lower_median(nearest);
  return a;
}

std::vector<CellReport> run_curse_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const LevyParams levy = levy_params_for(config);
  std::vector<CellReport> reports;
  for (std::size_t c = 0; c < config.schedule.size(); ++c) {
    const ScheduleCell& cell = config.schedule[c];
    const SpaceKind space = space_for(config.space, cell.d, config.metric);

    auto data = std::make_shared<const Dataset>(
        sample(space, cell.n, derive_seed(config.seed, {c, kDatasetStream})));
    PivotSet pivots =
        select_pivots(*data, cell.k, config.strategy,
                      derive_seed(config.seed, {c, kPivotStream}));
    const PivotIndex index = PivotIndex::build(data, std::move(pivots));

    CellReport report;
    report.cell = cell;
    report.space = space.name();
    report.metric = space.metric_name();
    report.strategy = to_string(config.strategy);
    report.seed = config.seed;
    report.build_cost = index.build_cost();

    for (std::size_t i = 0; i < config.queries_per_cell; ++i) {
      Rng rng(derive_seed(config.seed, {c, kQueryStream, i}));
      const Point q = sample_point(space, rng);
      // Workload generation: this scan is not charged to the query.
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < data->size(); ++j) {
        nearest = std::min(nearest, distance(space, q.view(), data->point(j)));
      }
      const double r = config.radius_policy == RadiusPolicy::kNearestNeighbour
                           ? nearest
                           : config.fixed_radius;
      const QueryResult result = index.range_query(q, r);
      if (result.cost != cell.k + (cell.n - result.discarded)) {
        throw Error("cost accounting mismatch in curse experiment");
      }
      report.queries.push_back(
          {r, nearest, result.discarded, result.cost, result.matches.size()});
    }
    report.aggregates = aggregate_queries(report.queries, cell.n);

    const double half_radius = report.aggregates.median_radius / 2.0;
    if (space.type() == SpaceType::kSphere) {
      report.alpha_source = "sphere_closed_form";
      report.alpha_half_radius = sphere_alpha_bound(cell.d, half_radius);
    } else {
      report.alpha_source = "levy";
      report.levy = levy;
      report.alpha_half_radius =
          clamp_probability(levy_bound(levy, cell.d, half_radius));
    }
    report.pruning_bound = pruning_bound(cell.k, report.alpha_half_radius);
    if (cell.k >= 1) {
      const VcFamily family =
          space.is_binary() ? VcFamily::kHamming : VcFamily::kL2;
      const double delta = pivot_family_vc_bound({family, cell.d, cell.k});
      report.vc_dimension_bound = delta;
      report.sample_size_bound =
          sample_size_bound(delta, config.vc_eps, config.vc_eta);
    }

    const std::vector<double> pairs = sample_pair_distances(
        space, config.n_pairs, derive_seed(config.seed, {c, kPairStream}));
    report.pair_distance_median = lower_median(pairs);
    try {
      report.intrinsic_dimension = intrinsic_dimension(pairs);
    } catch (const DegenerateDistribution&) {
      report.intrinsic_dimension = std::numeric_limits<double>::infinity();
    }

    if (!config.epsilons.empty()) {
      const ConcentrationEstimate est = estimate_concentration(
          space, config.epsilons, config.alpha_samples,
          derive_seed(config.seed, {c, kAlphaStream}));
      report.epsilons = est.epsilons;
      report.alpha_hat = est.alpha_hat;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<ConcentrationRow> run_concentration_experiment(
    const SpaceKind& space_template, const std::vector<std::size_t>& dims,
    const std::vector<double>& epsilons, std::size_t n_samples,
    std::uint64_t seed) {
  std::vector<ConcentrationRow> rows;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const std::size_t d = dims[di];
    const SpaceKind space =
        SpaceKind::parse(space_template.name(), d, space_template.metric_name());
    const ConcentrationEstimate est = estimate_concentration(
        space, epsilons, n_samples, derive_seed(seed, {di}));
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      double bound = 0.0;
      switch (space.type()) {
        case SpaceType::kSphere:
          bound = sphere_alpha_bound(d, epsilons[e]);
          break;
        case SpaceType::kHammingCube:
          bound = levy_bound(kHammingLevyParams, d, epsilons[e]);
          break;
        case SpaceType::kBall:
          bound = levy_bound(kBallLevyParams, d, epsilons[e]);
          break;
      }
      rows.push_back({d, epsilons[e], est.alpha_hat[e], bound});
    }
  }
  return rows;
}

std::vector<ProjectionSeries> run_projection_figure(
    const std::vector<std::size_t>& dims, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("run_projection_figure: n must be >= 1");
  std::vector<ProjectionSeries> out;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const Dataset data =
        sample(SpaceKind::sphere(dims[di]), n, derive_seed(seed, {di}));
    out.push_back({dims[di], project2d(data, 0, 1)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Records

std::vector<ReportRecord> cell_records(const CellReport& cell) {
  std::vector<ReportRecord> out;
  auto add = [&](std::string quantity, double value) {
    out.push_back({"curse", cell.space, cell.cell.d, cell.cell.n, cell.cell.k,
                   cell.strategy, cell.seed, cell.metric, std::move(quantity),
                   value});
  };
  const CellAggregates& a = cell.aggregates;
  add("queries", static_cast<double>(cell.queries.size()));
  add("build_cost", static_cast<double>(cell.build_cost));
  add("storage", static_cast<double>(cell.cell.n * cell.cell.k));
  add("median_cost", a.median_cost);
  add("mean_cost", a.mean_cost);
  add("median_cost_over_n", a.median_cost_over_n);
  add("median_pruned_fraction", a.median_pruned_fraction);
  add("median_discard_mass", a.median_pruned_fraction);
  add("median_unpruned_mass", a.median_unpruned_mass);
  add("median_radius", a.median_radius);
  add("nn_median", a.nn_median);
  add("pair_distance_median", cell.pair_distance_median);
  add("intrinsic_dimension", cell.intrinsic_dimension);
  add("alpha_half_median_radius", cell.alpha_half_radius);
  add("pruning_bound", cell.pruning_bound);
  add("pruning_bound_vacuous", cell.pruning_bound >= 1.0 ? 1.0 : 0.0);
  if (cell.alpha_source == "levy") {
    add("levy_C", cell.levy.C);
    add("levy_c", cell.levy.c);
  }
  if (cell.vc_dimension_bound) add("vc_dimension_bound", *cell.vc_dimension_bound);
  if (cell.sample_size_bound) {
    add("sample_size_bound", static_cast<double>(*cell.sample_size_bound));
  }
  for (std::size_t e = 0; e < cell.epsilons.size(); ++e) {
    add("alpha_hat[eps=" + eps_label(cell.epsilons[e]) + "]", cell.alpha_hat[e]);
  }
  return out;
}

std::vector<ReportRecord> query_records(const CellReport& cell) {
  std::vector<ReportRecord> out;
  auto add = [&](std::string quantity, double value) {
    out.push_back({"curse_queries", cell.space, cell.cell.d, cell.cell.n,
                   cell.cell.k, cell.strategy, cell.seed, cell.metric,
                   std::move(quantity), value});
  };
  for (std::size_t i = 0; i < cell.queries.size(); ++i) {
    const QueryRecord& q = cell.queries[i];
    add(query_label(i, "radius"), q.radius);
    add(query_label(i, "nn_distance"), q.nn_distance);
    add(query_label(i, "discarded"), static_cast<double>(q.discarded));
    add(query_label(i, "cost"), static_cast<double>(q.cost));
    add(query_label(i, "matches"), static_cast<double>(q.matches));
  }
  return out;
}

std::vector<ReportRecord> concentration_records(
    const std::vector<ConcentrationRow>& rows, const SpaceKind& space_template,
    std::size_t n_samples, std::uint64_t seed) {
  std::vector<ReportRecord> out;
  for (const auto& row : rows) {
    const std::string label = "[eps=" + eps_label(row.eps) + "]";
    for (auto [name, value] : {std::pair<const char*, double>{"alpha_hat", row.alpha_hat},
                               {"alpha_bound", row.bound}}) {
      out.push_back({"concentration", space_template.name(), row.d, n_samples,
                     0, "", seed, space_template.metric_name(),
                     std::string(name) + label, value});
    }
  }
  return out;
}

std::vector<ReportRecord> projection_records(
    const std::vector<ProjectionSeries>& series, std::uint64_t seed) {
  std::vector<ReportRecord> out;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      char x[32];
      char y[32];
      std::snprintf(x, sizeof x, "p%06zu.x", i);
      std::snprintf(y, sizeof y, "p%06zu.y", i);
      out.push_back({"projection", "sphere", s.d, s.points.size(), 0, "", seed,
                     "euclidean", x, s.points[i].first});
      out.push_back({"projection", "sphere", s.d, s.points.size(), 0, "", seed,
                     "euclidean", y, s.points[i].second});
    }
  }
  return out;
}

std::vector<ReportRecord> vc_records(const VcBoundInput& input, std::size_t n,
                                     double eps, double eta) {
  const double delta = pivot_family_vc_bound(input);
  const double exponent = vc_convergence_exponent(n, delta, eps);
  const double bound = vc_convergence_bound(n, delta, eps);
  std::vector<ReportRecord> out;
  auto add = [&](const char* quantity, double value) {
    out.push_back({"vc", to_string(input.family), input.d, n, input.k, "", 0,
                   to_string(input.family), quantity, value});
  };
  add("vc_dimension_bound", delta);
  add("growth_bound", growth_bound(n, delta));
  add("vc_convergence_exponent", exponent);
  add("vc_convergence_bound", bound);
  add("vc_convergence_vacuous", is_vacuous(bound) ? 1.0 : 0.0);
  add("sample_size_bound",
      static_cast<double>(sample_size_bound(delta, eps, eta)));
  return out;
}

void run_experiment(std::string_view name, std::string_view config_json,
                    const std::string& output, ReportFormat format) {
  const std::string ext = format == ReportFormat::kCsv ? ".csv" : ".json";
  if (name == "curse") {
    ExperimentConfig config = parse_experiment_config(config_json);
    const std::string dir = output.empty() ? config.output_dir : output;
    const auto reports = run_curse_experiment(config);
    std::vector<ReportRecord> aggregates, queries;
    for (const auto& r : reports) {
      auto a = cell_records(r);
      aggregates.insert(aggregates.end(), a.begin(), a.end());
      auto q = query_records(r);
      queries.insert(queries.end(), q.begin(), q.end());
    }
    const std::filesystem::path base(dir);
    emit_report(std::move(aggregates), format, (base / ("curse" + ext)).string());
    emit_report(std::move(queries), format,
                (base / ("curse_queries" + ext)).string());
    return;
  }

  const json j = parse_json(config_json);
  if (name == "concentration") {
    reject_unknown_keys(j, {"space", "metric", "dims", "epsilons", "n_samples",
                            "seed"});
    const std::uint64_t seed = require_seed(j);
    const auto dims = get_or<std::vector<std::size_t>>(
        j, "dims", std::vector<std::size_t>{10, 20, 50, 100});
    std::vector<double> default_eps;
    for (int i = 0; i <= 10; ++i) default_eps.push_back(i / 10.0);
    const auto eps = get_or<std::vector<double>>(j, "epsilons", default_eps);
    const auto n_samples = get_or<std::size_t>(j, "n_samples", 100000);
    const SpaceKind space =
        space_for(get_or<std::string>(j, "space", "sphere"), 2,
                  get_or<std::string>(j, "metric", "euclidean"));
    std::vector<ConcentrationRow> rows;
    try {
      rows = run_concentration_experiment(space, dims, eps, n_samples, seed);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    emit_report(concentration_records(rows, space, n_samples, seed), format,
                output);
    return;
  }
  if (name == "projection") {
    reject_unknown_keys(j, {"dims", "n", "seed"});
    const std::uint64_t seed = require_seed(j);
    const auto dims = get_or<std::vector<std::size_t>>(
        j, "dims", std::vector<std::size_t>{10, 20, 50, 100});
    const auto n = get_or<std::size_t>(j, "n", 1000);
    std::vector<ProjectionSeries> series;
    try {
      series = run_projection_figure(dims, n, seed);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    emit_report(projection_records(series, seed), format, output);
    return;
  }
  if (name == "vc") {
    reject_unknown_keys(j, {"family", "d", "k", "n", "eps", "eta"});
    std::vector<ReportRecord> records;
    try {
      const VcBoundInput input{
          parse_vc_family(get_or<std::string>(j, "family", "L2")),
          get_or<std::size_t>(j, "d", 1), get_or<std::size_t>(j, "k", 1)};
      records = vc_records(input, get_or<std::size_t>(j, "n", 1000000),
                           get_or<double>(j, "eps", 0.5),
                           get_or<double>(j, "eta", 0.1));
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    emit_report(std::move(records), format, output);
    return;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

}  // namespace pivotlab
