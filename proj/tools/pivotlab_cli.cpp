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

// pivotlab command-line front end. Talks to the library only through the C
// API in pivotlab.h.
//
// Exit codes: 0 success, 2 configuration or input error, 1 runtime error.

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pivotlab/pivotlab.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report(pl_status status) {
  if (status == PL_OK) return kExitOk;
  std::cerr << "pivotlab: " << pl_status_name(status) << ": " << pl_last_error()
            << '\n';
  return status == PL_CONFIG_ERROR || status == PL_INVALID_INPUT ? kExitConfig
                                                                 : kExitRuntime;
}

struct StatusError : std::runtime_error {
  explicit StatusError(pl_status s) : std::runtime_error("status"), status(s) {}
  pl_status status;
};

void check(pl_status status) {
  if (status != PL_OK) throw StatusError(status);
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<pl_dataset, Deleter<pl_dataset, pl_dataset_free>>;
using IndexPtr = std::unique_ptr<pl_index, Deleter<pl_index, pl_index_free>>;
using PointPtr = std::unique_ptr<pl_point, Deleter<pl_point, pl_point_free>>;
using ResultPtr = std::unique_ptr<pl_result, Deleter<pl_result, pl_result_free>>;

json read_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

// Options given on the command line override the config file.
class Overlay {
 public:
  explicit Overlay(CLI::App* app) : app_(app) {}

  template <typename T>
  void add(const std::string& flag, const std::string& key, T* target,
           const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, *target, help);
    // Lists may be given as "--dims 10,20" or "--dims 10 20".
    if constexpr (CLI::detail::is_mutable_container<T>::value) opt->delimiter(',');
    setters_.push_back([this, flag, key, target](json& j) {
      if (app_->count(flag)) j[key] = *target;
    });
  }

  void apply(json& j) const {
    for (const auto& s : setters_) s(j);
  }

 private:
  CLI::App* app_;
  std::vector<std::function<void(json&)>> setters_;
};

std::vector<json> parse_schedule(const std::string& text) {
  std::vector<json> cells;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t d = 0, n = 0, k = 0;
    char c1 = 0, c2 = 0;
    std::stringstream cell(item);
    if (!(cell >> d >> c1 >> n >> c2 >> k) || c1 != ':' || c2 != ':') {
      throw UsageError("schedule cells look like d:n:k, got '" + item + "'");
    }
    cells.push_back({{"d", d}, {"n", n}, {"k", k}});
  }
  return cells;
}

template <typename T>
T need(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw UsageError(std::string("missing required option '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("option '") + key + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw StatusError(PL_IO_ERROR);
}

std::string result_json(const pl_result* r, std::size_t query) {
  json j;
  j["query"] = query;
  j["radius"] = pl_result_radius(r);
  j["discarded"] = pl_result_discarded(r);
  j["cost"] = pl_result_cost(r);
  json matches = json::array();
  json distances = json::array();
  for (std::size_t i = 0; i < pl_result_size(r); ++i) {
    matches.push_back(pl_result_match(r, i));
    distances.push_back(pl_result_distance(r, i));
  }
  j["matches"] = matches;
  j["distances"] = distances;
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pivotlab: pivot-index similarity search laboratory"};
  app.require_subcommand(1);
  std::string config_path;

  // sample --------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "sample a dataset file");
  std::string s_space, s_metric, s_out;
  std::size_t s_d = 0, s_n = 0;
  std::uint64_t s_seed = 0;
  sample_cmd->add_option("--config", config_path, "JSON config file");
  Overlay sample_opts(sample_cmd);
  sample_opts.add("--space", "space", &s_space, "hamming | sphere | ball");
  sample_opts.add("--metric", "metric", &s_metric, "euclidean | geodesic");
  sample_opts.add("--d", "d", &s_d, "dimension");
  sample_opts.add("--n", "n", &s_n, "number of points");
  sample_opts.add("--seed", "seed", &s_seed, "seed");
  sample_opts.add("--out", "out", &s_out, "output dataset file");

  // build ---------------------------------------------------------------
  auto* build_cmd = app.add_subcommand("build", "build a pivot index file");
  std::string b_dataset, b_strategy, b_out;
  std::size_t b_k = 0;
  std::uint64_t b_seed = 0;
  build_cmd->add_option("--config", config_path, "JSON config file");
  Overlay build_opts(build_cmd);
  build_opts.add("--dataset", "dataset", &b_dataset, "dataset file");
  build_opts.add("--k", "k", &b_k, "number of pivots");
  build_opts.add("--strategy", "strategy", &b_strategy,
                 "random | farthest_first | incremental_mean_rho");
  build_opts.add("--seed", "seed", &b_seed, "pivot selection seed");
  build_opts.add("--out", "out", &b_out, "output index file");

  // query ---------------------------------------------------------------
  auto* query_cmd = app.add_subcommand("query", "run range or kNN queries");
  std::string q_dataset, q_index, q_point, q_out;
  std::size_t q_random = 0, q_knn = 0;
  double q_radius = 0.0;
  std::uint64_t q_seed = 0;
  bool q_linear = false;
  query_cmd->add_option("--config", config_path, "JSON config file");
  Overlay query_opts(query_cmd);
  query_opts.add("--dataset", "dataset", &q_dataset, "dataset file");
  query_opts.add("--index", "index", &q_index, "index file");
  query_opts.add("--point", "point", &q_point, "query point (dataset syntax)");
  query_opts.add("--random", "random", &q_random, "number of random centres");
  query_opts.add("--seed", "seed", &q_seed, "seed for random centres");
  query_opts.add("--radius", "radius", &q_radius, "range query radius");
  query_opts.add("--knn", "knn", &q_knn, "number of nearest neighbours");
  query_opts.add("--out", "out", &q_out, "output file (JSON lines)");
  query_cmd->add_flag("--linear-scan", q_linear, "use a linear scan");

  // curse ---------------------------------------------------------------
  auto* curse_cmd = app.add_subcommand("curse", "run the curse experiment");
  std::string c_space, c_metric, c_schedule, c_strategy, c_radius, c_out_dir,
      c_format = "csv";
  std::size_t c_queries = 0, c_pairs = 0, c_alpha = 0;
  std::vector<double> c_eps;
  std::uint64_t c_seed = 0;
  curse_cmd->add_option("--config", config_path, "JSON config file");
  Overlay curse_opts(curse_cmd);
  curse_opts.add("--space", "space", &c_space, "hamming | sphere | ball");
  curse_opts.add("--metric", "metric", &c_metric, "euclidean | geodesic");
  curse_cmd->add_option("--schedule", c_schedule, "cells d:n:k,d:n:k,...");
  curse_opts.add("--strategy", "strategy", &c_strategy, "pivot strategy");
  curse_opts.add("--queries", "queries_per_cell", &c_queries, "queries per cell");
  curse_cmd->add_option("--radius", c_radius, "nn | <fixed radius>");
  curse_opts.add("--epsilons", "epsilons", &c_eps, "eps grid for alpha");
  curse_opts.add("--alpha-samples", "alpha_samples", &c_alpha, "alpha samples");
  curse_opts.add("--n-pairs", "n_pairs", &c_pairs, "pairs for M_d and d~");
  curse_opts.add("--seed", "seed", &c_seed, "master seed");
  curse_opts.add("--out-dir", "output_dir", &c_out_dir, "output directory");
  curse_cmd->add_option("--format", c_format, "csv | json");

  // concentration -------------------------------------------------------
  auto* conc_cmd = app.add_subcommand("concentration",
                                      "estimate concentration functions");
  std::string k_space, k_metric, k_out, k_format = "csv";
  std::vector<std::size_t> k_dims;
  std::vector<double> k_eps;
  std::size_t k_samples = 0;
  std::uint64_t k_seed = 0;
  conc_cmd->add_option("--config", config_path, "JSON config file");
  Overlay conc_opts(conc_cmd);
  conc_opts.add("--space", "space", &k_space, "hamming | sphere | ball");
  conc_opts.add("--metric", "metric", &k_metric, "euclidean | geodesic");
  conc_opts.add("--dims", "dims", &k_dims, "dimensions");
  conc_opts.add("--epsilons", "epsilons", &k_eps, "eps grid");
  conc_opts.add("--samples", "n_samples", &k_samples, "Monte-Carlo samples");
  conc_opts.add("--seed", "seed", &k_seed, "seed");
  conc_cmd->add_option("--out", k_out, "output file")->required();
  conc_cmd->add_option("--format", k_format, "csv | json");

  // projection ----------------------------------------------------------
  auto* proj_cmd = app.add_subcommand("projection",
                                      "project sampled spheres onto 2 axes");
  std::string p_out, p_format = "csv";
  std::vector<std::size_t> p_dims;
  std::size_t p_n = 0;
  std::uint64_t p_seed = 0;
  proj_cmd->add_option("--config", config_path, "JSON config file");
  Overlay proj_opts(proj_cmd);
  proj_opts.add("--dims", "dims", &p_dims, "dimensions");
  proj_opts.add("--n", "n", &p_n, "points per sphere");
  proj_opts.add("--seed", "seed", &p_seed, "seed");
  proj_cmd->add_option("--out", p_out, "output file")->required();
  proj_cmd->add_option("--format", p_format, "csv | json");

  // vc ------------------------------------------------------------------
  auto* vc_cmd = app.add_subcommand("vc", "evaluate VC bounds");
  std::string v_family, v_out = "-", v_format = "csv";
  std::size_t v_d = 0, v_k = 0, v_n = 0;
  double v_eps = 0, v_eta = 0;
  vc_cmd->add_option("--config", config_path, "JSON config file");
  Overlay vc_opts(vc_cmd);
  vc_opts.add("--family", "family", &v_family, "L2 | Linf | Hamming");
  vc_opts.add("--d", "d", &v_d, "dimension");
  vc_opts.add("--k", "k", &v_k, "number of pivots");
  vc_opts.add("--n", "n", &v_n, "sample size");
  vc_opts.add("--eps", "eps", &v_eps, "accuracy");
  vc_opts.add("--eta", "eta", &v_eta, "failure probability");
  vc_cmd->add_option("--out", v_out, "output file, - for stdout");
  vc_cmd->add_option("--format", v_format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    json cfg = read_config_file(config_path);

    if (sample_cmd->parsed()) {
      sample_opts.apply(cfg);
      pl_dataset* raw = nullptr;
      const std::string metric = cfg.value("metric", std::string("euclidean"));
      check(pl_dataset_sample(need<std::string>(cfg, "space").c_str(),
                              need<std::size_t>(cfg, "d"), metric.c_str(),
                              need<std::size_t>(cfg, "n"),
                              need<std::uint64_t>(cfg, "seed"), &raw));
      DatasetPtr data(raw);
      check(pl_dataset_save(data.get(), need<std::string>(cfg, "out").c_str()));
      return kExitOk;
    }

    if (build_cmd->parsed()) {
      build_opts.apply(cfg);
      pl_dataset* raw = nullptr;
      check(pl_dataset_load(need<std::string>(cfg, "dataset").c_str(), &raw));
      DatasetPtr data(raw);
      pl_index* idx = nullptr;
      check(pl_index_build(data.get(), need<std::size_t>(cfg, "k"),
                           cfg.value("strategy", std::string("random")).c_str(),
                           cfg.value("seed", std::uint64_t{0}), &idx));
      IndexPtr index(idx);
      check(pl_index_save(index.get(), need<std::string>(cfg, "out").c_str()));
      std::cerr << "built " << pl_index_num_pivots(index.get())
                << " pivots, build cost " << pl_index_build_cost(index.get())
                << '\n';
      return kExitOk;
    }

    if (query_cmd->parsed()) {
      query_opts.apply(cfg);
      if (q_linear) cfg["linear_scan"] = true;
      pl_dataset* raw = nullptr;
      check(pl_dataset_load(need<std::string>(cfg, "dataset").c_str(), &raw));
      DatasetPtr data(raw);
      const bool linear = cfg.value("linear_scan", false);
      IndexPtr index;
      if (!linear) {
        pl_index* idx = nullptr;
        check(pl_index_load(data.get(), need<std::string>(cfg, "index").c_str(),
                            &idx));
        index.reset(idx);
      }
      std::vector<PointPtr> points;
      if (cfg.contains("point")) {
        pl_point* p = nullptr;
        check(pl_point_parse(data.get(), need<std::string>(cfg, "point").c_str(),
                             &p));
        points.emplace_back(p);
      } else {
        const auto count = need<std::size_t>(cfg, "random");
        const auto seed = need<std::uint64_t>(cfg, "seed");
        for (std::size_t i = 0; i < count; ++i) {
          pl_point* p = nullptr;
          check(pl_point_sample(data.get(), seed + i, &p));
          points.emplace_back(p);
        }
      }
      const bool knn = cfg.contains("knn");
      if (!knn && !cfg.contains("radius")) {
        throw UsageError("query needs --radius or --knn");
      }
      if (knn && linear) throw UsageError("--knn cannot use --linear-scan");
      std::string text;
      for (std::size_t i = 0; i < points.size(); ++i) {
        pl_result* r = nullptr;
        if (knn) {
          check(pl_knn_query(index.get(), points[i].get(),
                             need<std::size_t>(cfg, "knn"), &r));
        } else if (linear) {
          check(pl_linear_scan(data.get(), points[i].get(),
                               need<double>(cfg, "radius"), &r));
        } else {
          check(pl_range_query(index.get(), points[i].get(),
                               need<double>(cfg, "radius"), &r));
        }
        ResultPtr result(r);
        text += result_json(result.get(), i) + "\n";
      }
      write_text(cfg.value("out", std::string("-")), text);
      return kExitOk;
    }

    if (curse_cmd->parsed()) {
      curse_opts.apply(cfg);
      if (!c_schedule.empty()) cfg["schedule"] = parse_schedule(c_schedule);
      if (!c_radius.empty()) {
        if (c_radius == "nn") {
          cfg["radius"] = {{"policy", "nn"}};
        } else {
          try {
            cfg["radius"] = {{"policy", "fixed"}, {"r", std::stod(c_radius)}};
          } catch (const std::exception&) {
            throw UsageError("--radius takes 'nn' or a number");
          }
        }
      }
      return report(pl_run_experiment("curse", cfg.dump().c_str(),
                                      c_out_dir.empty() ? nullptr : c_out_dir.c_str(),
                                      c_format.c_str()));
    }

    if (conc_cmd->parsed()) {
      conc_opts.apply(cfg);
      return report(pl_run_experiment("concentration", cfg.dump().c_str(),
                                      k_out.c_str(), k_format.c_str()));
    }

    if (proj_cmd->parsed()) {
      proj_opts.apply(cfg);
      return report(pl_run_experiment("projection", cfg.dump().c_str(),
                                      p_out.c_str(), p_format.c_str()));
    }

    if (vc_cmd->parsed()) {
      vc_opts.apply(cfg);
      if (v_out == "-") {
        // Reports are written atomically to a file; stage one and print it.
        const auto tmp = std::filesystem::temp_directory_path() /
                         ("pivotlab-vc-" + std::to_string(::getpid()) + "." +
                          v_format);
        const int rc = report(pl_run_experiment(
            "vc", cfg.dump().c_str(), tmp.string().c_str(), v_format.c_str()));
        if (rc == kExitOk) {
          std::ifstream in(tmp, std::ios::binary);
          std::cout << in.rdbuf();
        }
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        return rc;
      }
      return report(pl_run_experiment("vc", cfg.dump().c_str(), v_out.c_str(),
                                      v_format.c_str()));
    }
  } catch (const StatusError& e) {
    return report(e.status);
  } catch (const UsageError& e) {
    std::cerr << "pivotlab: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "pivotlab: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
