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

#include "pairgt/pipeline.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string_view>
#include <utility>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

namespace {

template <typename E>
E parse_enum(std::string_view key, std::string_view text,
             const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [name, value] : names) {
    if (text == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "config: " + std::string(key) + " = '" + std::string(text) +
                  "' is not one of " + allowed);
}

const std::vector<std::pair<const char*, Scaling>> kScalings = {
    {"plain", Scaling::kPlain},
    {"center", Scaling::kCenter},
    {"row_col_scale", Scaling::kRowColScale},
    {"tfidf", Scaling::kTfidf}};
const std::vector<std::pair<const char*, HMode>> kHModes = {
    {"graph_only", HMode::kGraphOnly},
    {"value", HMode::kValue},
    {"text_only", HMode::kTextOnly},
    {"all_one", HMode::kAllOne}};
const std::vector<std::pair<const char*, Calibration>> kCalibrations = {
    {"none", Calibration::kNone},
    {"sigma1", Calibration::kSigma1},
    {"sigma2", Calibration::kSigma2}};
const std::vector<std::pair<const char*, ThresholdPopulation>> kPopulations = {
    {"nonzero", ThresholdPopulation::kNonzero},
    {"all", ThresholdPopulation::kAll}};
const std::vector<std::pair<const char*, ThresholdTest>> kTests = {
    {"magnitude", ThresholdTest::kMagnitude},
    {"signed", ThresholdTest::kSigned}};
const std::vector<std::pair<const char*, SvdMethod>> kMethods = {
    {"randomized", SvdMethod::kRandomized},
    {"lanczos", SvdMethod::kLanczos}};

template <typename E>
const char* enum_name(E value,
                      const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("auto");
}

// Binds every config field to a key once, for both directions.
struct Binder {
  std::map<std::string, std::function<void(std::string_view)>> readers;
  std::map<std::string, std::function<std::string()>> writers;

  void text(const char* key, std::string& field) {
    readers[key] = [&field](std::string_view v) { field = std::string(v); };
    writers[key] = [&field] { return field; };
  }
  void real(const char* key, double& field) {
    readers[key] = [&field, key](std::string_view v) {
      field = parse_double(v, key);
    };
    writers[key] = [&field] { return format_double(field); };
  }
  void count(const char* key, std::size_t& field) {
    readers[key] = [&field, key](std::string_view v) {
      field = static_cast<std::size_t>(parse_uint(v, key));
    };
    writers[key] = [&field] { return std::to_string(field); };
  }
  void seed(const char* key, std::uint64_t& field) {
    readers[key] = [&field, key](std::string_view v) {
      field = parse_uint(v, key);
    };
    writers[key] = [&field] { return std::to_string(field); };
  }
  void maybe(const char* key, std::optional<double>& field) {
    readers[key] = [&field, key](std::string_view v) {
      if (v == "auto") {
        field.reset();
      } else {
        field = parse_double(v, key);
      }
    };
    writers[key] = [&field] { return optional_text(field); };
  }
  template <typename E>
  void choice(const char* key, E& field,
              const std::vector<std::pair<const char*, E>>& names) {
    readers[key] = [&field, key, &names](std::string_view v) {
      field = parse_enum(key, v, names);
    };
    writers[key] = [&field, &names] {
      return std::string(enum_name(field, names));
    };
  }
};

void bind(Binder& b, RunConfig& c) {
  b.text("corpus", c.corpus);
  b.text("stopwords", c.stopwords);
  b.real("citizen_cutoff", c.citizen_cutoff);
  b.real("thread_cutoff", c.thread_cutoff);
  b.text("export_corpus", c.export_corpus);
  b.text("data_dir", c.data_dir);
  b.text("output_dir", c.output_dir);
  b.text("fit_dir", c.fit_dir);
  b.choice("scaling", c.scaling, kScalings);
  b.choice("h_mode", c.h_mode, kHModes);
  b.real("h", c.h);
  b.choice("calibration", c.calibration, kCalibrations);
  b.real("alpha", c.alpha);
  b.choice("threshold_population", c.threshold.population, kPopulations);
  b.choice("threshold_test", c.threshold.test, kTests);
  b.maybe("tau_c", c.tau_c);
  b.maybe("tau_p", c.tau_p);
  b.count("block_width", c.block_width);
  b.count("k_c", c.k_c);
  b.count("k_p", c.k_p);
  b.choice("svd_method", c.svd_method, kMethods);
  b.real("svd_tol", c.svd_tol);
  b.count("svd_max_iter", c.svd_max_iter);
  b.count("svd_oversample", c.svd_oversample);
  b.count("svd_power_iters", c.svd_power_iters);
  b.count("kmeans_restarts", c.kmeans_restarts);
  b.count("kmeans_max_iter", c.kmeans_max_iter);
  b.real("kmeans_tol", c.kmeans_tol);
  b.seed("seed", c.seed);
  b.count("top_n", c.top_n);
  b.count("scree_k", c.scree_k);
  b.real("attention_min_degree", c.attention_min_degree);
  b.count("histogram_bins", c.histogram_bins);
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) {
    throw Error(ErrorCode::kInvalidArgument, "config: " + m);
  };
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (std::isnan(c.h) || c.h < 0.0) fail("h must be nonnegative");
  if (c.k_c == 0 || c.k_p == 0) fail("k_c and k_p must be positive");
  if (c.block_width == 0) fail("block_width must be positive");
  if (!(c.svd_tol > 0.0)) fail("svd_tol must be positive");
  if (!(c.kmeans_tol >= 0.0)) fail("kmeans_tol must be nonnegative");
  if (c.kmeans_restarts == 0) fail("kmeans_restarts must be positive");
  if (c.histogram_bins == 0) fail("histogram_bins must be positive");
  if (!(c.citizen_cutoff > 0.0 && c.citizen_cutoff <= 1.0) ||
      !(c.thread_cutoff > 0.0 && c.thread_cutoff <= 1.0)) {
    fail("vocabulary cutoffs must lie in (0, 1]");
  }
}

bool ignored_key(std::string_view key) {
  return key.starts_with("benchmark.") || key.starts_with("simulate.");
}

}  // namespace

const char* to_string(Scaling s) { return enum_name(s, kScalings); }
const char* to_string(HMode m) { return enum_name(m, kHModes); }
const char* to_string(Calibration c) { return enum_name(c, kCalibrations); }

RunConfig RunConfig::from_settings(const Settings& s) {
  RunConfig c;
  Binder b;
  bind(b, c);
  for (const auto& [key, value] : s.entries()) {
    if (ignored_key(key)) continue;
    auto it = b.readers.find(key);
    if (it == b.readers.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "config: unknown key '" + key + "'");
    }
    it->second(value);
  }
  validate(c);
  return c;
}

Settings RunConfig::to_settings() const {
  RunConfig copy = *this;
  Binder b;
  bind(b, copy);
  Settings s;
  for (const auto& [key, writer] : b.writers) s.set(key, writer());
  return s;
}

SvdOptions RunConfig::svd_options() const {
  SvdOptions o;
  o.k = k();
  o.seed = derive_seed(seed, "svd");
  o.tol = svd_tol;
  o.max_iter = svd_max_iter;
  o.oversample = svd_oversample;
  o.power_iters = svd_power_iters;
  o.method = svd_method;
  return o;
}

KMeansOptions RunConfig::kmeans_options() const {
  KMeansOptions o;
  o.restarts = kmeans_restarts;
  o.seed = derive_seed(seed, "kmeans");
  o.max_iter = kmeans_max_iter;
  o.tol = kmeans_tol;
  return o;
}

SimilarityMode RunConfig::mode() const {
  switch (h_mode) {
    case HMode::kGraphOnly:
      return SimilarityMode::kGraphOnly;
    case HMode::kTextOnly:
      return SimilarityMode::kTextOnly;
    case HMode::kAllOne:
      return h == 0.0 ? SimilarityMode::kGraphOnly : SimilarityMode::kAllOne;
    case HMode::kValue:
      break;
  }
  if (h == 0.0) return SimilarityMode::kGraphOnly;
  if (std::isinf(h)) return SimilarityMode::kTextOnly;
  return SimilarityMode::kCombined;
}

CenteredMatrix transform_covariates(const SparseMatrix& m, Scaling scaling) {
  switch (scaling) {
    case Scaling::kPlain:
      return CenteredMatrix(m);
    case Scaling::kRowColScale:
      return center_columns(scale_rows_cols(m));
    case Scaling::kCenter:
    case Scaling::kTfidf:
      break;
  }
  return center_columns(m);
}

PreparedOperator build_operator(const FitInputs& inputs,
                                const RunConfig& config) {
  validate(config);
  PreparedOperator p;
  p.laplacian = std::make_shared<const RegularizedLaplacian>(
      inputs.a, config.tau_c, config.tau_p);
  const SimilarityMode mode = config.mode();
  if (mode == SimilarityMode::kGraphOnly) {
    p.op = std::make_unique<SimilarityOperator>(p.laplacian);
    return p;
  }
  if (inputs.x.rows() != inputs.a.rows() ||
      inputs.y.rows() != inputs.a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "fit: X has " + std::to_string(inputs.x.rows()) +
                    " rows and Y has " + std::to_string(inputs.y.rows()) +
                    " rows, but A is " + std::to_string(inputs.a.rows()) +
                    " x " + std::to_string(inputs.a.cols()));
  }
  p.x = std::make_shared<const CenteredMatrix>(
      transform_covariates(inputs.x, config.scaling));
  p.y = std::make_shared<const CenteredMatrix>(
      transform_covariates(inputs.y, config.scaling));
  const TextKernel kernel = mode == SimilarityMode::kAllOne
                                ? TextKernel::kAllOne
                                : TextKernel::kThresholded;
  if (kernel == TextKernel::kThresholded) {
    const CallResponse w =
        call_response(*p.x, *p.laplacian, *p.y, config.block_width);
    ThresholdedResponse t = threshold(w, config.alpha, config.threshold);
    p.omega = t.omega;
    p.threshold_population = t.population_size;
    p.response_all_zero = t.all_zero;
    p.thresholded = std::make_shared<const SparseMatrix>(std::move(t.values));
  }
  p.h_user = mode == SimilarityMode::kTextOnly ? kInfiniteWeight : config.h;
  p.h_internal = p.h_user;
  const bool finite = std::isfinite(p.h_user) && p.h_user > 0.0;
  if (finite && config.calibration != Calibration::kNone) {
    const std::size_t index =
        config.calibration == Calibration::kSigma1 ? 1 : 2;
    SvdOptions o = config.svd_options();
    o.k = index;
    o.seed = derive_seed(config.seed, "calibration/laplacian");
    p.sigma_ref_l = truncated_svd(*p.laplacian, o).sigma[index - 1];
    const SimilarityOperator text(p.laplacian, p.x, p.y, p.thresholded,
                                  kInfiniteWeight, kernel);
    o.seed = derive_seed(config.seed, "calibration/text");
    p.sigma_ref_text = truncated_svd(text, o).sigma[index - 1];
    p.h_internal = p.sigma_ref_text > 0.0
                       ? p.h_user * p.sigma_ref_l / p.sigma_ref_text
                       : 0.0;
  }
  p.op = std::make_unique<SimilarityOperator>(p.laplacian, p.x, p.y,
                                              p.thresholded, p.h_internal,
                                              kernel);
  return p;
}

namespace {

FitResult finish(PreparedOperator prepared, const LinearOperator& op,
                 const RunConfig& config) {
  FitResult r;
  r.embedding = truncated_svd(op, config.svd_options());
  normalize_rows(r.embedding);
  r.clusters = fit_clusters(r.embedding, config.k_c, config.k_p,
                            config.kmeans_options());
  r.prepared = std::move(prepared);
  return r;
}

}  // namespace

FitResult fit(const FitInputs& inputs, const RunConfig& config) {
  PreparedOperator p = build_operator(inputs, config);
  const LinearOperator& op = *p.op;
  return finish(std::move(p), op, config);
}

FitResult fit_disim(const SparseMatrix& a, const RunConfig& config) {
  validate(config);
  PreparedOperator p;
  p.laplacian =
      std::make_shared<const RegularizedLaplacian>(a, config.tau_c, config.tau_p);
  p.op = std::make_unique<SimilarityOperator>(p.laplacian);
  const LinearOperator& l = *p.laplacian;
  return finish(std::move(p), l, config);
}

}  // namespace pairgt
