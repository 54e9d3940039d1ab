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

// Mis-clustering benchmark over degree-corrected document simulations.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pairgt/pipeline.hpp"
#include "pairgt/settings.hpp"
#include "pairgt/simgen.hpp"

namespace pairgt {

enum class Axis {
  kBoth,   // sig_g = sig_t = 10^level
  kGraph,  // sig_g = 10^level, sig_t = 0
  kText,   // sig_t = 10^level, sig_g = 0
};

const char* to_string(Axis a);

struct BenchmarkConfig {
  std::vector<Axis> axes = {Axis::kBoth, Axis::kGraph, Axis::kText};
  /// Signal levels as base-10 exponents.
  std::vector<double> levels = {-1.8, -1.2, -0.6, -0.2, 0.4, 1.0, 2.0, 3.0};
  std::size_t n_reps = 100;
  /// Subset of combined, graph_only, text_only, all_one.
  std::vector<std::string> methods = {"combined"};
  std::uint64_t seed = 1;
  std::size_t kmeans_restarts = 100;
  std::size_t n_docs = 1000;
  std::size_t n_words = 1000;
  double links_per_doc = 20.0;
  double words_per_doc = 200.0;
  ThetaLaw theta = ThetaLaw::kOnes;
  double alpha = 0.05;
  double h = 1.0;
  Calibration calibration = Calibration::kSigma1;
  Scaling scaling = Scaling::kCenter;
  std::string output_dir = "benchmark";

  /// Reads "benchmark.*" keys plus seed and output_dir; ignores the rest.
  static BenchmarkConfig from_settings(const Settings& s);
  Settings to_settings() const;
};

struct BenchmarkCell {
  Axis axis = Axis::kBoth;
  double level = 0.0;
  double sig_g = 0.0;
  double sig_t = 0.0;
  std::string method;
  std::vector<double> rates;  // one per successful rep, in rep order
  std::vector<std::string> failures;
  double mean = 0.0;
  double std = 0.0;
  double seconds = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkCell> cells;
};

/// The fit configuration used for one simulated data set.
RunConfig benchmark_fit_config(const BenchmarkConfig& config,
                               const std::string& method,
                               std::uint64_t rep_seed);

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// Deterministic results table (no timings).
std::string benchmark_table(const BenchmarkResult& result);
/// Per-cell wall-clock seconds.
std::string benchmark_timing_table(const BenchmarkResult& result);

}  // namespace pairgt
