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

// Directory-level commands shared by the C API and the command-line tool.
// Each reads its inputs from disk, writes plain delimited files plus a
// manifest, and returns a short human-readable report.

#pragma once

#include <string>
#include <vector>

#include "pairgt/pipeline.hpp"
#include "pairgt/settings.hpp"
#include "pairgt/text.hpp"

namespace pairgt {

std::string cmd_ingest(const Settings& settings,
                       const Stemmer& stem = identity_stem);
std::string cmd_fit(const Settings& settings);
std::string cmd_diagnose(const Settings& settings);
std::string cmd_benchmark(const Settings& settings);
std::string cmd_simulate(const Settings& settings);

/// Reads adjacency.mtx and, when the mode uses text, the term matrices
/// matching the scaling (TF-IDF files for tfidf) from config.data_dir.
FitInputs load_fit_inputs(const RunConfig& config);

/// Writes labels, embeddings, singular values, T_ω(W) and the manifest.
void write_fit_outputs(const FitResult& result, const RunConfig& config);

/// First line of every manifest, without the trailing newline.
std::string manifest_header(const std::string& command);

/// Reads "index<TAB>key..." tables; returns "0".."n-1" when the file is
/// missing.
std::vector<std::string> load_keys(const std::string& path, std::size_t n);

}  // namespace pairgt
