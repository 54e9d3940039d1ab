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

// Exercises the shared library through the public header only.

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pairgt/pairgt.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pairgt_capi_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

pgt_matrix* diagonal_blocks(std::size_t n) {
  // Two disjoint complete blocks of a 2n x 2n bipartite graph.
  std::vector<std::size_t> r, c;
  std::vector<double> v;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        r.push_back(b * n + i);
        c.push_back(b * n + j);
        v.push_back(1.0);
      }
    }
  }
  pgt_matrix* m = nullptr;
  REQUIRE(pgt_matrix_from_triplets(2 * n, 2 * n, v.size(), r.data(), c.data(),
                                   v.data(), &m) == PGT_OK);
  return m;
}

char* stem_plural(const char* token, void*) {
  const std::size_t n = std::strlen(token);
  if (n < 4 || token[n - 1] != 's') return nullptr;
  char* out = static_cast<char*>(std::malloc(n));
  std::memcpy(out, token, n - 1);
  out[n - 1] = '\0';
  return out;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::strlen(pgt_version()) > 0);
  pgt_matrix* m = nullptr;
  CHECK(pgt_matrix_from_triplets(2, 2, 0, nullptr, nullptr, nullptr, nullptr) ==
        PGT_INVALID_ARGUMENT);
  CHECK(std::strlen(pgt_last_error()) > 0);
  const std::size_t r[] = {5};
  const std::size_t c[] = {0};
  const double v[] = {1.0};
  CHECK(pgt_matrix_from_triplets(2, 2, 1, r, c, v, &m) != PGT_OK);
  CHECK(m == nullptr);
  CHECK(std::string(pgt_last_error()).find('5') != std::string::npos);
}

TEST_CASE("matrix handles") {
  const std::size_t r[] = {0, 1, 0};
  const std::size_t c[] = {2, 0, 2};
  const double v[] = {1.0, 2.5, 1.0};
  pgt_matrix* m = nullptr;
  REQUIRE(pgt_matrix_from_triplets(2, 3, 3, r, c, v, &m) == PGT_OK);
  std::size_t rows = 0, cols = 0, nnz = 0;
  REQUIRE(pgt_matrix_shape(m, &rows, &cols, &nnz) == PGT_OK);
  CHECK(rows == 2);
  CHECK(cols == 3);
  CHECK(nnz == 2);
  const fs::path d = fresh("matrix");
  const std::string path = (d / "m.mtx").string();
  REQUIRE(pgt_matrix_write(m, path.c_str()) == PGT_OK);
  pgt_matrix* back = nullptr;
  REQUIRE(pgt_matrix_read(path.c_str(), &back) == PGT_OK);
  REQUIRE(pgt_matrix_shape(back, &rows, &cols, &nnz) == PGT_OK);
  CHECK(nnz == 2);
  pgt_matrix_free(back);
  pgt_matrix_free(m);
  pgt_matrix_free(nullptr);
  CHECK(pgt_matrix_read((d / "missing.mtx").string().c_str(), &back) == PGT_IO);
}

TEST_CASE("config handles") {
  pgt_config* c = nullptr;
  REQUIRE(pgt_config_new(&c) == PGT_OK);
  REQUIRE(pgt_config_set(c, "k_c", "3") == PGT_OK);
  char buf[8];
  std::size_t needed = 0;
  REQUIRE(pgt_config_get(c, "k_c", buf, sizeof buf, &needed) == PGT_OK);
  CHECK(needed == 2);
  CHECK(std::string(buf) == "3");
  REQUIRE(pgt_config_set(c, "corpus", "a/long/path.tsv") == PGT_OK);
  CHECK(pgt_config_get(c, "corpus", buf, 4, &needed) == PGT_OK);
  CHECK(needed == 16);
  CHECK(pgt_config_get(c, "k_p", buf, sizeof buf, &needed) ==
        PGT_INVALID_ARGUMENT);
  const fs::path d = fresh("config");
  REQUIRE(pgt_config_save(c, (d / "run.conf").string().c_str()) == PGT_OK);
  pgt_config* loaded = nullptr;
  REQUIRE(pgt_config_load((d / "run.conf").string().c_str(), &loaded) == PGT_OK);
  REQUIRE(pgt_config_get(loaded, "k_c", buf, sizeof buf, &needed) == PGT_OK);
  CHECK(std::string(buf) == "3");
  pgt_config_free(loaded);
  pgt_config_free(c);
}

TEST_CASE("graph-only fit separates disjoint blocks") {
  pgt_matrix* a = diagonal_blocks(6);
  pgt_config* c = nullptr;
  REQUIRE(pgt_config_new(&c) == PGT_OK);
  pgt_config_set(c, "k_c", "2");
  pgt_config_set(c, "k_p", "2");
  pgt_config_set(c, "h", "0");
  pgt_fit* f = nullptr;
  REQUIRE(pgt_fit_run(a, nullptr, nullptr, c, &f) == PGT_OK);
  std::size_t nc = 0, np = 0, k = 0;
  REQUIRE(pgt_fit_dims(f, &nc, &np, &k) == PGT_OK);
  CHECK(nc == 12);
  CHECK(np == 12);
  CHECK(k == 2);
  std::vector<int32_t> labels(nc), truth(nc);
  REQUIRE(pgt_fit_citizen_labels(f, labels.data()) == PGT_OK);
  for (std::size_t i = 0; i < nc; ++i) {
    truth[i] = i < 6 ? 1 : 2;
    CHECK(labels[i] >= 1);
    CHECK(labels[i] <= 2);
  }
  double rate = 1.0;
  REQUIRE(pgt_misclustering_rate(nc, labels.data(), truth.data(), &rate) ==
          PGT_OK);
  CHECK(rate == 0.0);
  std::vector<double> sigma(k), centrality(nc);
  REQUIRE(pgt_fit_singular_values(f, sigma.data()) == PGT_OK);
  CHECK(sigma[0] >= sigma[1]);
  REQUIRE(pgt_fit_citizen_centrality(f, centrality.data()) == PGT_OK);
  for (double v : centrality) CHECK(v == doctest::Approx(1.0));
  pgt_fit_free(f);

  pgt_config_set(c, "h", "0.5");
  CHECK(pgt_fit_run(a, nullptr, nullptr, c, &f) == PGT_INVALID_ARGUMENT);
  pgt_config_set(c, "k_c", "zero");
  pgt_config_set(c, "h", "0");
  CHECK(pgt_fit_run(a, nullptr, nullptr, c, &f) == PGT_PARSE);
  pgt_config_free(c);
  pgt_matrix_free(a);
}

TEST_CASE("combined fit reports omega and h") {
  pgt_matrix* a = diagonal_blocks(8);
  std::vector<std::size_t> r, col;
  std::vector<double> v;
  for (std::size_t i = 0; i < 16; ++i) {
    r.push_back(i);
    col.push_back(i < 8 ? i % 3 : 3 + i % 3);
    v.push_back(1.0);
  }
  pgt_matrix* x = nullptr;
  REQUIRE(pgt_matrix_from_triplets(16, 6, v.size(), r.data(), col.data(),
                                   v.data(), &x) == PGT_OK);
  pgt_config* c = nullptr;
  pgt_config_new(&c);
  pgt_config_set(c, "k_c", "2");
  pgt_config_set(c, "k_p", "2");
  pgt_config_set(c, "calibration", "none");
  pgt_config_set(c, "h", "0.25");
  pgt_fit* f = nullptr;
  REQUIRE(pgt_fit_run(a, x, x, c, &f) == PGT_OK);
  double omega = -1.0, h = -1.0;
  REQUIRE(pgt_fit_omega(f, &omega) == PGT_OK);
  REQUIRE(pgt_fit_h_internal(f, &h) == PGT_OK);
  CHECK(omega > 0.0);
  CHECK(h == 0.25);
  pgt_fit_free(f);

  pgt_matrix* short_x = nullptr;
  const std::size_t zr[] = {0};
  const std::size_t zc[] = {0};
  const double zv[] = {1.0};
  pgt_matrix_from_triplets(15, 6, 1, zr, zc, zv, &short_x);
  CHECK(pgt_fit_run(a, short_x, x, c, &f) == PGT_DIMENSION_MISMATCH);
  pgt_matrix_free(short_x);
  pgt_matrix_free(x);
  pgt_matrix_free(a);
  pgt_config_free(c);
}

TEST_CASE("misclustering rate through the C API") {
  const int32_t est[] = {2, 2, 1, 1};
  const int32_t truth[] = {1, 1, 2, 2};
  const int32_t off[] = {1, 2, 2, 2};
  double rate = -1.0;
  REQUIRE(pgt_misclustering_rate(4, est, truth, &rate) == PGT_OK);
  CHECK(rate == 0.0);
  REQUIRE(pgt_misclustering_rate(4, off, truth, &rate) == PGT_OK);
  CHECK(rate == 0.25);
  const int32_t negative[] = {-1, 0, 0, 0};
  CHECK(pgt_misclustering_rate(4, negative, truth, &rate) ==
        PGT_INVALID_ARGUMENT);
}

TEST_CASE("directory commands") {
  const fs::path d = fresh("commands");
  pgt_config* c = nullptr;
  pgt_config_new(&c);
  pgt_config_set(c, "corpus", PAIRGT_FIXTURES "/corpus.tsv");
  pgt_config_set(c, "stopwords", PAIRGT_FIXTURES "/stopwords.txt");
  pgt_config_set(c, "data_dir", (d / "data").string().c_str());
  char* report = nullptr;
  REQUIRE(pgt_run_ingest(c, stem_plural, nullptr, &report) == PGT_OK);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("A: 3 x 3") != std::string::npos);
  pgt_string_free(report);
  CHECK(fs::exists(d / "data" / "adjacency.mtx"));

  pgt_config_set(c, "corpus", (d / "nothing.tsv").string().c_str());
  CHECK(pgt_run_ingest(c, nullptr, nullptr, nullptr) == PGT_IO);

  pgt_config* s = nullptr;
  pgt_config_new(&s);
  pgt_config_set(s, "data_dir", (d / "sim").string().c_str());
  pgt_config_set(s, "simulate.n_c", "60");
  pgt_config_set(s, "simulate.n_p", "50");
  pgt_config_set(s, "simulate.p_in", "0.3");
  REQUIRE(pgt_run_simulate(s, nullptr) == PGT_OK);
  pgt_config_set(s, "k_c", "2");
  pgt_config_set(s, "k_p", "2");
  pgt_config_set(s, "output_dir", (d / "fit").string().c_str());
  pgt_config_set(s, "kmeans_restarts", "5");
  REQUIRE(pgt_run_fit(s, nullptr) == PGT_OK);
  CHECK(fs::exists(d / "fit" / "citizen_labels.tsv"));
  pgt_config_set(s, "fit_dir", (d / "fit").string().c_str());
  pgt_config_set(s, "output_dir", (d / "diag").string().c_str());
  REQUIRE(pgt_run_diagnose(s, &report) == PGT_OK);
  pgt_string_free(report);
  CHECK(fs::exists(d / "diag" / "psi.tsv"));
  pgt_config_free(s);
  pgt_config_free(c);
}
