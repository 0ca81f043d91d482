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

#include "pivotlab/pivotlab.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "pivotlab/concentration.hpp"
#include "pivotlab/error.hpp"
#include "pivotlab/harness.hpp"
#include "pivotlab/pivot_index.hpp"
#include "pivotlab/spaces.hpp"
#include "pivotlab/vc_bounds.hpp"

struct pl_dataset {
  std::shared_ptr<const pivotlab::Dataset> data;
};

struct pl_point {
  pivotlab::Point point;
};

struct pl_index {
  pivotlab::PivotIndex index;
};

struct pl_result {
  pivotlab::QueryResult result;
};

namespace {

thread_local std::string last_error;

pl_status fail(pl_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
pl_status guarded(Body&& body) {
  try {
    body();
    return PL_OK;
  } catch (const pivotlab::ConfigError& e) {
    return fail(PL_CONFIG_ERROR, e.what());
  } catch (const pivotlab::InvalidInput& e) {
    return fail(PL_INVALID_INPUT, e.what());
  } catch (const pivotlab::DegenerateDistribution& e) {
    return fail(PL_DEGENERATE, e.what());
  } catch (const pivotlab::IoError& e) {
    return fail(PL_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PL_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(PL_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(PL_INTERNAL_ERROR, "unknown error");
  }
}

pl_status null_argument(const char* what) {
  return fail(PL_INVALID_INPUT, (std::string(what) + " is NULL").c_str());
}

}  // namespace

extern "C" {

const char* pl_version(void) { return "1.0.0"; }

const char* pl_last_error(void) { return last_error.c_str(); }

const char* pl_status_name(pl_status status) {
  switch (status) {
    case PL_OK:
      return "ok";
    case PL_INVALID_INPUT:
      return "invalid input";
    case PL_CONFIG_ERROR:
      return "config error";
    case PL_DEGENERATE:
      return "degenerate distribution";
    case PL_IO_ERROR:
      return "I/O error";
    case PL_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

pl_status pl_dataset_sample(const char* kind, size_t d, const char* metric,
                            size_t n, uint64_t seed, pl_dataset** out) {
  if (!kind) return null_argument("kind");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto space =
        pivotlab::SpaceKind::parse(kind, d, metric ? metric : "euclidean");
    auto data =
        std::make_shared<const pivotlab::Dataset>(pivotlab::sample(space, n, seed));
    *out = new pl_dataset{std::move(data)};
  });
}

pl_status pl_dataset_load(const char* path, pl_dataset** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto data =
        std::make_shared<const pivotlab::Dataset>(pivotlab::load_dataset(path));
    *out = new pl_dataset{std::move(data)};
  });
}

pl_status pl_dataset_save(const pl_dataset* dataset, const char* path) {
  if (!dataset) return null_argument("dataset");
  if (!path) return null_argument("path");
  return guarded([&] { pivotlab::save_dataset(path, *dataset->data); });
}

size_t pl_dataset_size(const pl_dataset* dataset) {
  return dataset ? dataset->data->size() : 0;
}

size_t pl_dataset_dim(const pl_dataset* dataset) {
  return dataset ? dataset->data->space().dim() : 0;
}

void pl_dataset_free(pl_dataset* dataset) { delete dataset; }

pl_status pl_point_parse(const pl_dataset* space_of, const char* text,
                         pl_point** out) {
  if (!space_of) return null_argument("space_of");
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new pl_point{pivotlab::parse_point(space_of->data->space(), text)};
  });
}

pl_status pl_point_sample(const pl_dataset* space_of, uint64_t seed,
                          pl_point** out) {
  if (!space_of) return null_argument("space_of");
  if (!out) return null_argument("out");
  return guarded([&] {
    pivotlab::Rng rng(seed);
    *out = new pl_point{pivotlab::sample_point(space_of->data->space(), rng)};
  });
}

pl_status pl_point_copy_from(const pl_dataset* dataset, size_t j,
                             pl_point** out) {
  if (!dataset) return null_argument("dataset");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new pl_point{dataset->data->copy_point(j)}; });
}

void pl_point_free(pl_point* point) { delete point; }

pl_status pl_index_build(const pl_dataset* dataset, size_t k,
                         const char* strategy, uint64_t seed, pl_index** out) {
  if (!dataset) return null_argument("dataset");
  if (!strategy) return null_argument("strategy");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto pivots = pivotlab::select_pivots(
        *dataset->data, k, pivotlab::parse_pivot_strategy(strategy), seed);
    *out = new pl_index{pivotlab::PivotIndex::build(dataset->data, std::move(pivots))};
  });
}

pl_status pl_index_load(const pl_dataset* dataset, const char* path,
                        pl_index** out) {
  if (!dataset) return null_argument("dataset");
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded(
      [&] { *out = new pl_index{pivotlab::load_index(path, dataset->data)}; });
}

pl_status pl_index_save(const pl_index* index, const char* path) {
  if (!index) return null_argument("index");
  if (!path) return null_argument("path");
  return guarded([&] { pivotlab::save_index(path, index->index); });
}

size_t pl_index_num_pivots(const pl_index* index) {
  return index ? index->index.num_pivots() : 0;
}

uint64_t pl_index_build_cost(const pl_index* index) {
  return index ? index->index.build_cost() : 0;
}

void pl_index_free(pl_index* index) { delete index; }

pl_status pl_range_query(const pl_index* index, const pl_point* q, double r,
                         pl_result** out) {
  if (!index) return null_argument("index");
  if (!q) return null_argument("q");
  if (!out) return null_argument("out");
  return guarded(
      [&] { *out = new pl_result{index->index.range_query(q->point, r)}; });
}

pl_status pl_knn_query(const pl_index* index, const pl_point* q, size_t k_nn,
                       pl_result** out) {
  if (!index) return null_argument("index");
  if (!q) return null_argument("q");
  if (!out) return null_argument("out");
  return guarded(
      [&] { *out = new pl_result{index->index.knn_query(q->point, k_nn)}; });
}

pl_status pl_linear_scan(const pl_dataset* dataset, const pl_point* q,
                         double r, pl_result** out) {
  if (!dataset) return null_argument("dataset");
  if (!q) return null_argument("q");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new pl_result{pivotlab::linear_scan(*dataset->data, q->point, r)};
  });
}

size_t pl_result_size(const pl_result* result) {
  return result ? result->result.matches.size() : 0;
}

size_t pl_result_match(const pl_result* result, size_t i) {
  return result && i < result->result.matches.size() ? result->result.matches[i]
                                                     : SIZE_MAX;
}

double pl_result_distance(const pl_result* result, size_t i) {
  return result && i < result->result.distances.size()
             ? result->result.distances[i]
             : -1.0;
}

size_t pl_result_discarded(const pl_result* result) {
  return result ? result->result.discarded : 0;
}

uint64_t pl_result_cost(const pl_result* result) {
  return result ? result->result.cost : 0;
}

double pl_result_radius(const pl_result* result) {
  return result ? result->result.radius : 0.0;
}

void pl_result_free(pl_result* result) { delete result; }

pl_status pl_run_experiment(const char* name, const char* config_json,
                            const char* output, const char* format) {
  if (!name) return null_argument("name");
  if (!config_json) return null_argument("config_json");
  return guarded([&] {
    pivotlab::ReportFormat fmt;
    try {
      fmt = pivotlab::parse_report_format(format ? format : "csv");
    } catch (const pivotlab::InvalidInput& e) {
      throw pivotlab::ConfigError(e.what());
    }
    const std::string out = output ? output : "";
    if (out.empty() && std::string(name) != "curse") {
      throw pivotlab::ConfigError("an output path is required");
    }
    pivotlab::run_experiment(name, config_json, out, fmt);
  });
}

pl_status pl_sphere_alpha_bound(size_t d, double eps, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = pivotlab::sphere_alpha_bound(d, eps); });
}

pl_status pl_levy_bound(double C, double c, size_t d, double eps, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = pivotlab::levy_bound({C, c}, d, eps); });
}

double pl_pruning_bound(size_t k, double alpha_half_r) {
  return pivotlab::pruning_bound(k, alpha_half_r);
}

pl_status pl_pivot_family_vc_bound(const char* family, size_t d, size_t k,
                                   double* out) {
  if (!family) return null_argument("family");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = pivotlab::pivot_family_vc_bound(
        {pivotlab::parse_vc_family(family), d, k});
  });
}

pl_status pl_vc_convergence_bound(size_t n, double delta, double eps,
                                  double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = pivotlab::vc_convergence_bound(n, delta, eps); });
}

pl_status pl_sample_size_bound(double delta, double eps, double eta,
                               uint64_t* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = pivotlab::sample_size_bound(delta, eps, eta); });
}

}  // extern "C"
