// Copyright 2026 The pairgt Authors.
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

#include "pairgt/pairgt.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "pairgt/commands.hpp"
#include "pairgt/error.hpp"
#include "pairgt/format.hpp"
#include "pairgt/pipeline.hpp"
#include "pairgt/settings.hpp"
#include "pairgt/simgen.hpp"

struct pgt_matrix {
  pairgt::SparseMatrix m;
};

struct pgt_config {
  pairgt::Settings s;
};

struct pgt_fit {
  pairgt::FitResult r;
};

namespace {

thread_local std::string g_last_error;

pgt_status fail(pgt_status code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

template <typename F>
pgt_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PGT_OK;
  } catch (const pairgt::Error& e) {
    return fail(static_cast<pgt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PGT_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(PGT_INTERNAL, e.what());
  } catch (...) {
    return fail(PGT_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) {
    throw pairgt::Error(pairgt::ErrorCode::kInvalidArgument,
                        std::string(what) + " must not be NULL");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void give_report(const std::string& text, char** report) {
  if (report) *report = duplicate(text);
}

void copy_labels(const std::vector<std::size_t>& labels, int32_t* out) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = static_cast<int32_t>(labels[i] + 1);
  }
}

}  // namespace

extern "C" {

const char* pgt_version(void) { return PAIRGT_VERSION; }

const char* pgt_last_error(void) { return g_last_error.c_str(); }

pgt_status pgt_matrix_from_triplets(size_t rows, size_t cols, size_t nnz,
                                    const size_t* row, const size_t* col,
                                    const double* value, pgt_matrix** out) {
  return guarded([&] {
    require(out, "out");
    require(nnz == 0 || (row && col && value), "triplet arrays");
    std::vector<pairgt::Triplet> t(nnz);
    for (size_t k = 0; k < nnz; ++k) t[k] = {row[k], col[k], value[k]};
    *out = new pgt_matrix{pairgt::build_sparse(std::move(t), rows, cols)};
  });
}

pgt_status pgt_matrix_read(const char* path, pgt_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pgt_matrix{pairgt::load_triplets(path)};
  });
}

pgt_status pgt_matrix_write(const pgt_matrix* m, const char* path) {
  return guarded([&] {
    require(m, "matrix");
    require(path, "path");
    pairgt::save_triplets(path, m->m);
  });
}

pgt_status pgt_matrix_shape(const pgt_matrix* m, size_t* rows, size_t* cols,
                            size_t* nnz) {
  return guarded([&] {
    require(m, "matrix");
    if (rows) *rows = m->m.rows();
    if (cols) *cols = m->m.cols();
    if (nnz) *nnz = m->m.nnz();
  });
}

void pgt_matrix_free(pgt_matrix* m) { delete m; }

pgt_status pgt_config_new(pgt_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new pgt_config{};
  });
}

pgt_status pgt_config_load(const char* path, pgt_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pgt_config{pairgt::Settings::load(path)};
  });
}

pgt_status pgt_config_set(pgt_config* c, const char* key, const char* value) {
  return guarded([&] {
    require(c, "config");
    require(key, "key");
    require(value, "value");
    c->s.set(key, value);
  });
}

pgt_status pgt_config_get(const pgt_config* c, const char* key, char* buf,
                          size_t buf_size, size_t* needed) {
  return guarded([&] {
    require(c, "config");
    require(key, "key");
    const auto v = c->s.get(key);
    if (!v) {
      throw pairgt::Error(pairgt::ErrorCode::kInvalidArgument,
                          std::string("config: key '") + key + "' is not set");
    }
    if (needed) *needed = v->size() + 1;
    if (buf && buf_size >= v->size() + 1) {
      std::memcpy(buf, v->c_str(), v->size() + 1);
    }
  });
}

pgt_status pgt_config_save(const pgt_config* c, const char* path) {
  return guarded([&] {
    require(c, "config");
    require(path, "path");
    pairgt::write_file(path, c->s.to_text());
  });
}

void pgt_config_free(pgt_config* c) { delete c; }

pgt_status pgt_fit_run(const pgt_matrix* a, const pgt_matrix* x,
                       const pgt_matrix* y, const pgt_config* c,
                       pgt_fit** out) {
  return guarded([&] {
    require(a, "adjacency");
    require(c, "config");
    require(out, "out");
    const pairgt::RunConfig rc = pairgt::RunConfig::from_settings(c->s);
    pairgt::FitInputs in;
    in.a = a->m;
    if (rc.mode() != pairgt::SimilarityMode::kGraphOnly) {
      require(x && y, "term matrices");
      in.x = x->m;
      in.y = y->m;
    }
    auto f = std::make_unique<pgt_fit>();
    f->r = pairgt::fit(in, rc);
    *out = f.release();
  });
}

pgt_status pgt_fit_dims(const pgt_fit* f, size_t* n_citizens, size_t* n_posts,
                        size_t* k) {
  return guarded([&] {
    require(f, "fit");
    if (n_citizens) *n_citizens = f->r.clusters.citizen_labels.size();
    if (n_posts) *n_posts = f->r.clusters.post_labels.size();
    if (k) *k = static_cast<size_t>(f->r.embedding.sigma.size());
  });
}

pgt_status pgt_fit_citizen_labels(const pgt_fit* f, int32_t* labels) {
  return guarded([&] {
    require(f, "fit");
    require(labels, "labels");
    copy_labels(f->r.clusters.citizen_labels, labels);
  });
}

pgt_status pgt_fit_post_labels(const pgt_fit* f, int32_t* labels) {
  return guarded([&] {
    require(f, "fit");
    require(labels, "labels");
    copy_labels(f->r.clusters.post_labels, labels);
  });
}

pgt_status pgt_fit_citizen_centrality(const pgt_fit* f, double* out) {
  return guarded([&] {
    require(f, "fit");
    require(out, "out");
    const auto& v = f->r.clusters.citizen_centrality;
    std::copy(v.begin(), v.end(), out);
  });
}

pgt_status pgt_fit_post_centrality(const pgt_fit* f, double* out) {
  return guarded([&] {
    require(f, "fit");
    require(out, "out");
    const auto& v = f->r.clusters.post_centrality;
    std::copy(v.begin(), v.end(), out);
  });
}

pgt_status pgt_fit_singular_values(const pgt_fit* f, double* sigma) {
  return guarded([&] {
    require(f, "fit");
    require(sigma, "sigma");
    const auto& s = f->r.embedding.sigma;
    for (Eigen::Index i = 0; i < s.size(); ++i) sigma[i] = s[i];
  });
}

pgt_status pgt_fit_omega(const pgt_fit* f, double* omega) {
  return guarded([&] {
    require(f, "fit");
    require(omega, "omega");
    *omega = f->r.prepared.omega;
  });
}

pgt_status pgt_fit_h_internal(const pgt_fit* f, double* h) {
  return guarded([&] {
    require(f, "fit");
    require(h, "h");
    *h = f->r.prepared.h_internal;
  });
}

void pgt_fit_free(pgt_fit* f) { delete f; }

pgt_status pgt_run_ingest(const pgt_config* c, pgt_stemmer stem,
                          void* stem_user, char** report) {
  return guarded([&] {
    require(c, "config");
    pairgt::Stemmer stemmer = pairgt::identity_stem;
    if (stem) {
      stemmer = [stem, stem_user](std::string_view token) {
        const std::string t(token);
        char* r = stem(t.c_str(), stem_user);
        if (!r) return t;
        std::string out(r);
        std::free(r);
        return out;
      };
    }
    give_report(pairgt::cmd_ingest(c->s, stemmer), report);
  });
}

pgt_status pgt_run_fit(const pgt_config* c, char** report) {
  return guarded([&] {
    require(c, "config");
    give_report(pairgt::cmd_fit(c->s), report);
  });
}

pgt_status pgt_run_diagnose(const pgt_config* c, char** report) {
  return guarded([&] {
    require(c, "config");
    give_report(pairgt::cmd_diagnose(c->s), report);
  });
}

pgt_status pgt_run_benchmark(const pgt_config* c, char** report) {
  return guarded([&] {
    require(c, "config");
    give_report(pairgt::cmd_benchmark(c->s), report);
  });
}

pgt_status pgt_run_simulate(const pgt_config* c, char** report) {
  return guarded([&] {
    require(c, "config");
    give_report(pairgt::cmd_simulate(c->s), report);
  });
}

void pgt_string_free(char* s) { std::free(s); }

pgt_status pgt_misclustering_rate(size_t n, const int32_t* estimated,
                                  const int32_t* truth, double* rate) {
  return guarded([&] {
    require(rate, "rate");
    require(n == 0 || (estimated && truth), "label arrays");
    std::vector<std::size_t> e(n), t(n);
    for (size_t i = 0; i < n; ++i) {
      if (estimated[i] < 0 || truth[i] < 0) {
        throw pairgt::Error(pairgt::ErrorCode::kInvalidArgument,
                            "misclustering_rate: labels must be nonnegative");
      }
      e[i] = static_cast<std::size_t>(estimated[i]);
      t[i] = static_cast<std::size_t>(truth[i]);
    }
    *rate = pairgt::misclustering_rate(e, t);
  });
}

}  // extern "C"
