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

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pairgt/pairgt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

// Flag name (dashes) to config key.
struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

const std::vector<FlagSpec> kIngestFlags = {
    {"corpus", "corpus", "Corpus file"},
    {"stopwords", "stopwords", "Stopword list, one word per line"},
    {"citizen-cutoff", "citizen_cutoff", "Minimum citizen document frequency"},
    {"thread-cutoff", "thread_cutoff", "Minimum thread document frequency"},
    {"export-corpus", "export_corpus", "Write the parsed corpus back out"},
    {"data-dir", "data_dir", "Directory for matrices and id maps"},
};

const std::vector<FlagSpec> kFitFlags = {
    {"data-dir", "data_dir", "Directory holding ingested matrices"},
    {"output-dir", "output_dir", "Directory for fit outputs"},
    {"scaling", "scaling", "plain | center | row_col_scale | tfidf"},
    {"h-mode", "h_mode", "graph_only | value | text_only | all_one"},
    {"h", "h", "Text weight when h-mode is value"},
    {"calibration", "calibration", "none | sigma1 | sigma2"},
    {"alpha", "alpha", "Fraction of call-response entries kept"},
    {"threshold-population", "threshold_population", "nonzero | all"},
    {"threshold-test", "threshold_test", "magnitude | signed"},
    {"tau-c", "tau_c", "Citizen degree regularizer or auto"},
    {"tau-p", "tau_p", "Post degree regularizer or auto"},
    {"block-width", "block_width", "Column block width for the response"},
    {"k-c", "k_c", "Number of citizen clusters"},
    {"k-p", "k_p", "Number of post clusters"},
    {"svd-method", "svd_method", "randomized | lanczos"},
    {"svd-tol", "svd_tol", "Relative residual tolerance"},
    {"svd-max-iter", "svd_max_iter", "Maximum solver iterations"},
    {"svd-oversample", "svd_oversample", "Randomized oversampling"},
    {"svd-power-iters", "svd_power_iters", "Minimum power iterations"},
    {"kmeans-restarts", "kmeans_restarts", "k-means restarts"},
    {"kmeans-max-iter", "kmeans_max_iter", "k-means iteration cap"},
    {"kmeans-tol", "kmeans_tol", "k-means centroid shift tolerance"},
    {"seed", "seed", "Master seed"},
};

const std::vector<FlagSpec> kDiagnoseFlags = {
    {"data-dir", "data_dir", "Directory holding ingested matrices"},
    {"fit-dir", "fit_dir", "Directory holding fit outputs"},
    {"output-dir", "output_dir", "Directory for diagnostic tables"},
    {"top-n", "top_n", "Rows per keyword and centrality table"},
    {"scree-k", "scree_k", "Singular values in the scree table"},
    {"attention-min-degree", "attention_min_degree",
     "Minimum comments for the attention histogram"},
    {"histogram-bins", "histogram_bins", "Attention histogram bins"},
    {"seed", "seed", "Master seed"},
};

const std::vector<FlagSpec> kBenchmarkFlags = {
    {"output-dir", "output_dir", "Directory for benchmark tables"},
    {"axes", "benchmark.axes", "Comma list of both, graph, text"},
    {"levels", "benchmark.levels", "Comma list of signal levels"},
    {"reps", "benchmark.n_reps", "Replicates per cell"},
    {"methods", "benchmark.methods",
     "Comma list of combined, graph_only, text_only, all_one"},
    {"kmeans-restarts", "benchmark.kmeans_restarts", "k-means restarts"},
    {"n-docs", "benchmark.n_docs", "Documents per data set"},
    {"n-words", "benchmark.n_words", "Vocabulary size"},
    {"links-per-doc", "benchmark.links_per_doc", "Expected links per doc"},
    {"words-per-doc", "benchmark.words_per_doc", "Expected words per doc"},
    {"theta", "benchmark.theta", "ones | power_law"},
    {"alpha", "benchmark.alpha", "Fraction of call-response entries kept"},
    {"h", "benchmark.h", "Text weight"},
    {"calibration", "benchmark.calibration", "none | sigma1 | sigma2"},
    {"scaling", "benchmark.scaling", "Covariate scaling"},
    {"seed", "seed", "Master seed"},
};

const std::vector<FlagSpec> kSimulateFlags = {
    {"data-dir", "data_dir", "Directory for the generated matrices"},
    {"model", "simulate.model", "ncscbm | dcsbm"},
    {"n-c", "simulate.n_c", "Citizens"},
    {"n-p", "simulate.n_p", "Posts"},
    {"k", "simulate.k", "Blocks"},
    {"p-in", "simulate.p_in", "Within-block edge probability"},
    {"p-out", "simulate.p_out", "Between-block edge probability"},
    {"m-c", "simulate.m_c", "Citizen covariate dimension"},
    {"m-p", "simulate.m_p", "Post covariate dimension"},
    {"mean-in", "simulate.mean_in", "Covariate mean on block columns"},
    {"mean-out", "simulate.mean_out", "Covariate mean elsewhere"},
    {"noise", "simulate.noise", "Covariate noise scale"},
    {"covariates", "simulate.covariates", "gaussian | bernoulli"},
    {"n-docs", "simulate.n_docs", "Documents (dcsbm)"},
    {"n-words", "simulate.n_words", "Vocabulary size (dcsbm)"},
    {"sig-g", "simulate.sig_g", "Graph signal (dcsbm)"},
    {"sig-t", "simulate.sig_t", "Text signal (dcsbm)"},
    {"theta", "simulate.theta", "ones | power_law"},
    {"seed", "seed", "Master seed"},
};

struct ConfigDeleter {
  void operator()(pgt_config* c) const { pgt_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pgt_config, ConfigDeleter>;

int exit_code(pgt_status s) {
  if (s == PGT_OK) return kExitOk;
  return s <= PGT_DIMENSION_MISMATCH ? kExitUser : kExitInternal;
}

int report_failure(pgt_status s) {
  std::cerr << "pairgt: error: " << pgt_last_error() << '\n';
  return exit_code(s);
}

struct Command {
  CLI::App* app = nullptr;
  const std::vector<FlagSpec>* flags = nullptr;
  std::map<std::string, std::string> values;
  pgt_status (*run)(const pgt_config*, char**) = nullptr;
};

void add_flags(Command& cmd) {
  for (const auto& f : *cmd.flags) {
    cmd.app->add_option_function<std::string>(
        std::string("--") + f.flag,
        [&cmd, key = std::string(f.key)](const std::string& v) {
          cmd.values[key] = v;
        },
        f.help);
  }
}

pgt_status run_ingest(const pgt_config* c, char** report) {
  return pgt_run_ingest(c, nullptr, nullptr, report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-text co-clustering of bipartite interaction data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pgt_version());

  std::string config_path;
  std::vector<std::string> overrides;
  std::string save_path;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "Configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a key: --set key=value");
  app.add_option("--save-config", save_path,
                 "Write the resolved configuration and exit");
  app.add_flag("-q,--quiet", quiet, "Suppress the report");

  Command commands[] = {
      {app.add_subcommand("ingest", "Parse a corpus into matrices"),
       &kIngestFlags, {}, run_ingest},
      {app.add_subcommand("fit", "Co-cluster citizens and posts"),
       &kFitFlags, {}, pgt_run_fit},
      {app.add_subcommand("diagnose", "Interaction, keyword and scree tables"),
       &kDiagnoseFlags, {}, pgt_run_diagnose},
      {app.add_subcommand("benchmark", "Simulation study over signal levels"),
       &kBenchmarkFlags, {}, pgt_run_benchmark},
      {app.add_subcommand("simulate", "Draw a synthetic data set"),
       &kSimulateFlags, {}, pgt_run_simulate},
  };
  for (auto& cmd : commands) {
    cmd.app->fallthrough();
    cmd.app->set_help_flag("--help", "Print this help message and exit");
    add_flags(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUser;
  }

  pgt_config* raw = nullptr;
  pgt_status s = config_path.empty() ? pgt_config_new(&raw)
                                     : pgt_config_load(config_path.c_str(), &raw);
  if (s != PGT_OK) return report_failure(s);
  ConfigPtr config(raw);

  Command* selected = nullptr;
  for (auto& cmd : commands) {
    if (cmd.app->parsed()) selected = &cmd;
  }

  // Precedence: file, then named flags, then --set.
  for (const auto& [key, value] : selected->values) {
    s = pgt_config_set(config.get(), key.c_str(), value.c_str());
    if (s != PGT_OK) return report_failure(s);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "pairgt: error: --set expects key=value, got '" << o
                << "'\n";
      return kExitUser;
    }
    s = pgt_config_set(config.get(), o.substr(0, eq).c_str(),
                       o.substr(eq + 1).c_str());
    if (s != PGT_OK) return report_failure(s);
  }

  if (!save_path.empty()) {
    s = pgt_config_save(config.get(), save_path.c_str());
    return s == PGT_OK ? kExitOk : report_failure(s);
  }

  char* report = nullptr;
  s = selected->run(config.get(), &report);
  if (s != PGT_OK) return report_failure(s);
  if (report) {
    if (!quiet) std::fputs(report, stdout);
    pgt_string_free(report);
  }
  return kExitOk;
}
