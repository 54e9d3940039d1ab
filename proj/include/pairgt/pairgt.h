/* Copyright 2026 The pairgt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* pairgt: graph contextualization of a bipartite comment graph with the
 * text of its two node sets. Plain C interface over opaque handles.
 *
 * Every function returning pgt_status leaves a thread-local message for
 * pgt_last_error() when it fails. Handles are not thread-safe; distinct
 * handles may be used from distinct threads. Cluster labels crossing this
 * boundary are 1-based. */

#ifndef PAIRGT_PAIRGT_H_
#define PAIRGT_PAIRGT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PAIRGT_BUILDING_LIBRARY)
#define PGT_API __attribute__((visibility("default")))
#else
#define PGT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pgt_status {
  PGT_OK = 0,
  PGT_INVALID_ARGUMENT = 1,
  PGT_PARSE = 2,
  PGT_IO = 3,
  PGT_DIMENSION_MISMATCH = 4,
  PGT_NUMERIC = 5,
  PGT_NOT_CONVERGED = 6,
  PGT_RESOURCE_LIMIT = 7,
  PGT_INTERNAL = 8
} pgt_status;

typedef struct pgt_matrix pgt_matrix;
typedef struct pgt_config pgt_config;
typedef struct pgt_fit pgt_fit;

PGT_API const char* pgt_version(void);
/* Message of the last failure on this thread; "" if none. */
PGT_API const char* pgt_last_error(void);

/* Sparse matrices. Duplicate (row, col) entries are summed. */
PGT_API pgt_status pgt_matrix_from_triplets(size_t rows, size_t cols,
                                            size_t nnz, const size_t* row,
                                            const size_t* col,
                                            const double* value,
                                            pgt_matrix** out);
PGT_API pgt_status pgt_matrix_read(const char* path, pgt_matrix** out);
PGT_API pgt_status pgt_matrix_write(const pgt_matrix* m, const char* path);
PGT_API pgt_status pgt_matrix_shape(const pgt_matrix* m, size_t* rows,
                                    size_t* cols, size_t* nnz);
PGT_API void pgt_matrix_free(pgt_matrix* m);

/* Key/value configuration, same keys as the configuration file. */
PGT_API pgt_status pgt_config_new(pgt_config** out);
PGT_API pgt_status pgt_config_load(const char* path, pgt_config** out);
PGT_API pgt_status pgt_config_set(pgt_config* c, const char* key,
                                  const char* value);
/* Copies the value (NUL-terminated) into buf when it fits; *needed always
 * receives the size including the terminator. PGT_INVALID_ARGUMENT if the
 * key is unset. */
PGT_API pgt_status pgt_config_get(const pgt_config* c, const char* key,
                                  char* buf, size_t buf_size, size_t* needed);
PGT_API pgt_status pgt_config_save(const pgt_config* c, const char* path);
PGT_API void pgt_config_free(pgt_config* c);

/* In-memory fit. x and y may be NULL for graph-only configurations. */
PGT_API pgt_status pgt_fit_run(const pgt_matrix* a, const pgt_matrix* x,
                               const pgt_matrix* y, const pgt_config* c,
                               pgt_fit** out);
PGT_API pgt_status pgt_fit_dims(const pgt_fit* f, size_t* n_citizens,
                                size_t* n_posts, size_t* k);
/* Arrays must hold n_citizens (n_posts) entries. */
PGT_API pgt_status pgt_fit_citizen_labels(const pgt_fit* f, int32_t* labels);
PGT_API pgt_status pgt_fit_post_labels(const pgt_fit* f, int32_t* labels);
PGT_API pgt_status pgt_fit_citizen_centrality(const pgt_fit* f, double* out);
PGT_API pgt_status pgt_fit_post_centrality(const pgt_fit* f, double* out);
/* k values, nonincreasing. */
PGT_API pgt_status pgt_fit_singular_values(const pgt_fit* f, double* sigma);
PGT_API pgt_status pgt_fit_omega(const pgt_fit* f, double* omega);
PGT_API pgt_status pgt_fit_h_internal(const pgt_fit* f, double* h);
PGT_API void pgt_fit_free(pgt_fit* f);

/* Directory-level commands. The report (may be NULL) receives a
 * malloc-allocated summary to release with pgt_string_free.
 * A stemmer returns a malloc-allocated replacement for the token, which
 * the library frees, or NULL to keep the token unchanged. */
typedef char* (*pgt_stemmer)(const char* token, void* user);
PGT_API pgt_status pgt_run_ingest(const pgt_config* c, pgt_stemmer stem,
                                  void* stem_user, char** report);
PGT_API pgt_status pgt_run_fit(const pgt_config* c, char** report);
PGT_API pgt_status pgt_run_diagnose(const pgt_config* c, char** report);
PGT_API pgt_status pgt_run_benchmark(const pgt_config* c, char** report);
PGT_API pgt_status pgt_run_simulate(const pgt_config* c, char** report);
PGT_API void pgt_string_free(char* s);

/* Labels are any nonnegative integers; only the partition matters. */
PGT_API pgt_status pgt_misclustering_rate(size_t n, const int32_t* estimated,
                                          const int32_t* truth, double* rate);

#ifdef __cplusplus
}
#endif

#endif /* PAIRGT_PAIRGT_H_ */
