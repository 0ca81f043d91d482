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

/* C interface to pivotlab.
 *
 * Objects are opaque handles created by pl_*_create/sample/load/build and
 * released with the matching pl_*_free. Every fallible call returns a
 * pl_status; on failure pl_last_error() describes the problem. The message
 * is per thread and stays valid until the next failing call on that thread.
 *
 * An index keeps its dataset alive, so a dataset handle may be freed while
 * indexes built from it are still in use.
 */

#ifndef PIVOTLAB_PIVOTLAB_H_
#define PIVOTLAB_PIVOTLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PL_API __declspec(dllexport)
#else
#define PL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_INVALID_INPUT = 1,
  PL_CONFIG_ERROR = 2,
  PL_DEGENERATE = 3,
  PL_IO_ERROR = 4,
  PL_INTERNAL_ERROR = 5
} pl_status;

typedef struct pl_dataset pl_dataset;
typedef struct pl_point pl_point;
typedef struct pl_index pl_index;
typedef struct pl_result pl_result;

PL_API const char* pl_version(void);
PL_API const char* pl_last_error(void);
PL_API const char* pl_status_name(pl_status status);

/* Datasets. kind: "hamming" | "sphere" | "ball"; metric: "euclidean" |
 * "geodesic" (sphere only, NULL for the default). */
PL_API pl_status pl_dataset_sample(const char* kind, size_t d,
                                   const char* metric, size_t n, uint64_t seed,
                                   pl_dataset** out);
PL_API pl_status pl_dataset_load(const char* path, pl_dataset** out);
PL_API pl_status pl_dataset_save(const pl_dataset* dataset, const char* path);
PL_API size_t pl_dataset_size(const pl_dataset* dataset);
PL_API size_t pl_dataset_dim(const pl_dataset* dataset);
PL_API void pl_dataset_free(pl_dataset* dataset);

/* Query points of a dataset's space. Text uses the dataset file syntax. */
PL_API pl_status pl_point_parse(const pl_dataset* space_of, const char* text,
                                pl_point** out);
PL_API pl_status pl_point_sample(const pl_dataset* space_of, uint64_t seed,
                                 pl_point** out);
PL_API pl_status pl_point_copy_from(const pl_dataset* dataset, size_t j,
                                    pl_point** out);
PL_API void pl_point_free(pl_point* point);

/* Pivot index. strategy: "random" | "farthest_first" |
 * "incremental_mean_rho". */
PL_API pl_status pl_index_build(const pl_dataset* dataset, size_t k,
                                const char* strategy, uint64_t seed,
                                pl_index** out);
PL_API pl_status pl_index_load(const pl_dataset* dataset, const char* path,
                               pl_index** out);
PL_API pl_status pl_index_save(const pl_index* index, const char* path);
PL_API size_t pl_index_num_pivots(const pl_index* index);
PL_API uint64_t pl_index_build_cost(const pl_index* index);
PL_API void pl_index_free(pl_index* index);

/* Queries. */
PL_API pl_status pl_range_query(const pl_index* index, const pl_point* q,
                                double r, pl_result** out);
PL_API pl_status pl_knn_query(const pl_index* index, const pl_point* q,
                              size_t k_nn, pl_result** out);
PL_API pl_status pl_linear_scan(const pl_dataset* dataset, const pl_point* q,
                                double r, pl_result** out);
PL_API size_t pl_result_size(const pl_result* result);
PL_API size_t pl_result_match(const pl_result* result, size_t i);
PL_API double pl_result_distance(const pl_result* result, size_t i);
PL_API size_t pl_result_discarded(const pl_result* result);
PL_API uint64_t pl_result_cost(const pl_result* result);
PL_API double pl_result_radius(const pl_result* result);
PL_API void pl_result_free(pl_result* result);

/* Experiments driven by a JSON config. name: "curse" | "concentration" |
 * "projection" | "vc". format: "csv" | "json". For "curse", output is a
 * directory (NULL or "" uses the config's output_dir); otherwise a file. */
PL_API pl_status pl_run_experiment(const char* name, const char* config_json,
                                   const char* output, const char* format);

/* Analytic bounds. Functions with preconditions report violations through
 * the status. */
PL_API pl_status pl_sphere_alpha_bound(size_t d, double eps, double* out);
PL_API pl_status pl_levy_bound(double C, double c, size_t d, double eps,
                               double* out);
PL_API double pl_pruning_bound(size_t k, double alpha_half_r);
PL_API pl_status pl_pivot_family_vc_bound(const char* family, size_t d,
                                          size_t k, double* out);
PL_API pl_status pl_vc_convergence_bound(size_t n, double delta, double eps,
                                         double* out);
PL_API pl_status pl_sample_size_bound(double delta, double eps, double eta,
                                      uint64_t* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PIVOTLAB_PIVOTLAB_H_
