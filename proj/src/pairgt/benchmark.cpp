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

#include "pairgt/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"
#include "pairgt/parallel.hpp"

namespace pairgt {

namespace {

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& show) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    out += show(item);
  }
  return out;
}

Axis parse_axis(std::string_view text) {
  if (text == "both") return Axis::kBoth;
  if (text == "graph") return Axis::kGraph;
  if (text == "text") return Axis::kText;
  throw Error(ErrorCode::kInvalidArgument,
              "config: benchmark axis '" + std::string(text) +
                  "' is not one of both, graph, text");
}

void check_method(const std::string& m) {
  if (m != "combined" && m != "graph_only" && m != "text_only" &&
      m != "all_one") {
    throw Error(ErrorCode::kInvalidArgument,
                "config: benchmark method '" + m +
                    "' is not one of combined, graph_only, text_only, all_one");
  }
}

}  // namespace

const char* to_string(Axis a) {
  switch (a) {
    case Axis::kBoth:
      return "both";
    case Axis::kGraph:
      return "graph";
    case Axis::kText:
      return "text";
  }
  return "?";
}

BenchmarkConfig BenchmarkConfig::from_settings(const Settings& s) {
  BenchmarkConfig c;
  // Shared keys go through RunConfig so their spelling is validated once.
  Settings shared;
  for (const auto& [key, value] : s.entries()) {
    if (key.starts_with("benchmark.")) {
      const std::string_view k = std::string_view(key).substr(10);
      if (k == "axes") {
        c.axes.clear();
        for (const auto& a : split_list(value)) c.axes.push_back(parse_axis(a));
      } else if (k == "levels") {
        c.levels.clear();
        for (const auto& l : split_list(value)) {
          c.levels.push_back(parse_double(l, "benchmark.levels"));
        }
      } else if (k == "n_reps") {
        c.n_reps = parse_uint(value, key);
      } else if (k == "methods") {
        c.methods = split_list(value);
      } else if (k == "kmeans_restarts") {
        c.kmeans_restarts = parse_uint(value, key);
      } else if (k == "n_docs") {
        c.n_docs = parse_uint(value, key);
      } else if (k == "n_words") {
        c.n_words = parse_uint(value, key);
      } else if (k == "links_per_doc") {
        c.links_per_doc = parse_double(value, key);
      } else if (k == "words_per_doc") {
        c.words_per_doc = parse_double(value, key);
      } else if (k == "theta") {
        if (value == "ones") {
          c.theta = ThetaLaw::kOnes;
        } else if (value == "power_law") {
          c.theta = ThetaLaw::kPowerLaw;
        } else {
          throw Error(ErrorCode::kInvalidArgument,
                      "config: benchmark.theta must be ones or power_law");
        }
      } else if (k == "alpha") {
        c.alpha = parse_double(value, key);
      } else if (k == "h") {
        c.h = parse_double(value, key);
      } else if (k == "calibration" || k == "scaling") {
        shared.set(std::string(k), value);
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "config: unknown key '" + key + "'");
      }
    } else if (key == "seed") {
      c.seed = parse_uint(value, key);
    } else if (key == "output_dir") {
      c.output_dir = value;
    }
  }
  const RunConfig rc = RunConfig::from_settings(shared);
  if (shared.contains("calibration")) c.calibration = rc.calibration;
  if (shared.contains("scaling")) c.scaling = rc.scaling;
  for (const auto& m : c.methods) check_method(m);
  if (c.axes.empty() || c.levels.empty() || c.methods.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config: benchmark axes, levels and methods must be nonempty");
  }
  if (c.n_reps == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "config: benchmark.n_reps must be positive");
  }
  return c;
}

Settings BenchmarkConfig::to_settings() const {
  Settings s;
  s.set("benchmark.axes",
        join(axes, [](Axis a) { return std::string(pairgt::to_string(a)); }));
  s.set("benchmark.levels", join(levels, format_double));
  s.set("benchmark.n_reps", std::to_string(n_reps));
  s.set("benchmark.methods", join(methods, [](const std::string& m) { return m; }));
  s.set("benchmark.kmeans_restarts", std::to_string(kmeans_restarts));
  s.set("benchmark.n_docs", std::to_string(n_docs));
  s.set("benchmark.n_words", std::to_string(n_words));
  s.set("benchmark.links_per_doc", format_double(links_per_doc));
  s.set("benchmark.words_per_doc", format_double(words_per_doc));
  s.set("benchmark.theta", theta == ThetaLaw::kOnes ? "ones" : "power_law");
  s.set("benchmark.alpha", format_double(alpha));
  s.set("benchmark.h", format_double(h));
  s.set("benchmark.calibration", pairgt::to_string(calibration));
  s.set("benchmark.scaling", pairgt::to_string(scaling));
  s.set("seed", std::to_string(seed));
  s.set("output_dir", output_dir);
  return s;
}

RunConfig benchmark_fit_config(const BenchmarkConfig& config,
                               const std::string& method,
                               std::uint64_t rep_seed) {
  check_method(method);
  RunConfig rc;
  rc.k_c = 2;
  rc.k_p = 2;
  rc.alpha = config.alpha;
  rc.scaling = config.scaling;
  rc.calibration = config.calibration;
  rc.kmeans_restarts = config.kmeans_restarts;
  rc.seed = derive_seed(rep_seed, "fit");
  rc.h = config.h;
  if (method == "combined") {
    rc.h_mode = HMode::kValue;
  } else if (method == "graph_only") {
    rc.h_mode = HMode::kGraphOnly;
  } else if (method == "text_only") {
    rc.h_mode = HMode::kTextOnly;
  } else {
    rc.h_mode = HMode::kAllOne;
  }
  return rc;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  struct Job {
    std::size_t axis;
    std::size_t level;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < config.axes.size(); ++a) {
    for (std::size_t l = 0; l < config.levels.size(); ++l) {
      for (std::size_t r = 0; r < config.n_reps; ++r) jobs.push_back({a, l, r});
    }
  }
  const std::size_t n_methods = config.methods.size();
  struct Outcome {
    double rate = 0.0;
    bool ok = false;
    std::string failure;
    double seconds = 0.0;
  };
  std::vector<Outcome> outcomes(jobs.size() * n_methods);

  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const Axis axis = config.axes[job.axis];
    const double sig = std::pow(10.0, config.levels[job.level]);
    DcsbmDocsSpec spec;
    spec.n_docs = config.n_docs;
    spec.n_words = config.n_words;
    spec.links_per_doc = config.links_per_doc;
    spec.words_per_doc = config.words_per_doc;
    spec.theta = config.theta;
    spec.sig_g = axis == Axis::kText ? 0.0 : sig;
    spec.sig_t = axis == Axis::kGraph ? 0.0 : sig;
    const std::uint64_t rep_seed =
        derive_seed(derive_seed(config.seed, to_string(axis)), job.level,
                    job.rep);
    std::optional<DcsbmDocsSample> sample;
    std::string sample_error;
    try {
      sample = sample_dcsbm_docs(spec, derive_seed(rep_seed, "data"));
    } catch (const std::exception& e) {
      sample_error = e.what();
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      Outcome& out = outcomes[j * n_methods + m];
      if (!sample) {
        out.failure = sample_error;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        const RunConfig rc =
            benchmark_fit_config(config, config.methods[m], rep_seed);
        const FitInputs inputs{sample->a, sample->x, sample->x};
        const FitResult fit_result = fit(inputs, rc);
        out.rate = misclustering_rate(fit_result.clusters.citizen_labels,
                                      sample->labels);
        out.ok = true;
      } catch (const std::exception& e) {
        out.failure = e.what();
      }
      out.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
  });

  BenchmarkResult result;
  for (std::size_t a = 0; a < config.axes.size(); ++a) {
    for (std::size_t l = 0; l < config.levels.size(); ++l) {
      for (std::size_t m = 0; m < n_methods; ++m) {
        BenchmarkCell cell;
        cell.axis = config.axes[a];
        cell.level = config.levels[l];
        const double sig = std::pow(10.0, cell.level);
        cell.sig_g = cell.axis == Axis::kText ? 0.0 : sig;
        cell.sig_t = cell.axis == Axis::kGraph ? 0.0 : sig;
        cell.method = config.methods[m];
        for (std::size_t j = 0; j < jobs.size(); ++j) {
          if (jobs[j].axis != a || jobs[j].level != l) continue;
          const Outcome& out = outcomes[j * n_methods + m];
          cell.seconds += out.seconds;
          if (out.ok) {
            cell.rates.push_back(out.rate);
          } else {
            cell.failures.push_back("rep " + std::to_string(jobs[j].rep) +
                                    ": " + out.failure);
          }
        }
        const double n = static_cast<double>(cell.rates.size());
        if (n > 0) {
          cell.mean =
              std::accumulate(cell.rates.begin(), cell.rates.end(), 0.0) / n;
          double ss = 0.0;
          for (double r : cell.rates) ss += (r - cell.mean) * (r - cell.mean);
          cell.std = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        } else {
          cell.mean = std::nan("");
          cell.std = std::nan("");
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

std::string benchmark_table(const BenchmarkResult& result) {
  std::string out =
      "axis\tlog10_signal\tsig_g\tsig_t\tmethod\tmean_rate\tstd_rate\tn_reps\t"
      "n_failed\n";
  for (const auto& c : result.cells) {
    out += std::string(to_string(c.axis)) + '\t' + format_double(c.level) +
           '\t' + format_double(c.sig_g) + '\t' + format_double(c.sig_t) +
           '\t' + c.method + '\t' + format_double(c.mean) + '\t' +
           format_double(c.std) + '\t' + std::to_string(c.rates.size()) +
           '\t' + std::to_string(c.failures.size()) + '\n';
  }
  return out;
}

std::string benchmark_timing_table(const BenchmarkResult& result) {
  std::string out = "axis\tlog10_signal\tmethod\tseconds\n";
  for (const auto& c : result.cells) {
    out += std::string(to_string(c.axis)) + '\t' + format_double(c.level) +
           '\t' + c.method + '\t' + format_double(c.seconds) + '\n';
  }
  return out;
}

}  // namespace pairgt
