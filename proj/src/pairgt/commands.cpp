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

#include "pairgt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "pairgt/benchmark.hpp"
#include "pairgt/diagnostics.hpp"
#include "pairgt/error.hpp"
#include "pairgt/format.hpp"
#include "pairgt/simgen.hpp"

namespace pairgt {

namespace fs = std::filesystem;

namespace {

std::string in_dir(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void save_matrix(const std::string& path, const SparseMatrix& m) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  save_triplets(path, m);
}

std::string short_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Right-aligned columns, first column left-aligned.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) {
      width[c] = std::max(width[c], r[c].size());
    }
  }
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      const std::string pad(width[c] - r[c].size(), ' ');
      if (c == 0) {
        out += r[c] + pad;
      } else {
        out += "  " + pad + r[c];
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> read_table(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    for (std::string_view f : split(line, '\t')) fields.emplace_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::vector<std::string> load_terms(const std::string& path, std::size_t n) {
  if (!fs::exists(path)) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(std::to_string(j));
    return out;
  }
  std::vector<std::string> terms;
  for (auto& row : read_table(path)) terms.push_back(row.at(0));
  if (terms.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "'" + path + "' lists " + std::to_string(terms.size()) +
                    " terms, expected " + std::to_string(n));
  }
  return terms;
}

std::string labels_table(const std::vector<std::string>& keys,
                         const std::vector<std::size_t>& labels,
                         const std::vector<double>& centrality,
                         const std::vector<bool>& low_confidence) {
  std::string out = "index\tkey\tcluster\tcentrality\tlow_confidence\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i) + '\t' + keys[i] + '\t' +
           std::to_string(labels[i] + 1) + '\t' +
           format_double(centrality[i]) + '\t' +
           (low_confidence[i] ? "1" : "0") + '\n';
  }
  return out;
}

std::string embedding_table(const std::vector<std::string>& keys,
                            const DenseMatrix& u,
                            const std::vector<std::size_t>& zero_rows) {
  std::vector<bool> zero(u.rows(), false);
  for (std::size_t i : zero_rows) zero[i] = true;
  std::string out = "index\tkey";
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    out += "\tu" + std::to_string(c + 1);
  }
  out += "\tzero_row\n";
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    out += std::to_string(i) + '\t' + keys[i];
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      out += '\t' + format_double(u(i, c));
    }
    out += zero[i] ? "\t1\n" : "\t0\n";
  }
  return out;
}

struct LoadedLabels {
  std::vector<std::size_t> labels;
  std::vector<double> centrality;
  std::vector<bool> low_confidence;
  std::vector<std::string> keys;
};

LoadedLabels load_labels(const std::string& path, std::size_t k) {
  LoadedLabels out;
  for (const auto& row : read_table(path)) {
    if (row.size() < 5) {
      throw Error(ErrorCode::kParse,
                  "'" + path + "': expected 5 columns per row");
    }
    const std::size_t cluster = parse_uint(row[2], "cluster");
    if (cluster == 0 || cluster > k) {
      throw Error(ErrorCode::kParse, "'" + path + "': cluster " + row[2] +
                                         " outside 1.." + std::to_string(k));
    }
    out.keys.push_back(row[1]);
    out.labels.push_back(cluster - 1);
    out.centrality.push_back(parse_double(row[3], "centrality"));
    out.low_confidence.push_back(row[4] == "1");
  }
  return out;
}

std::string interaction_tsv(const InteractionMatrix& m, const char* corner) {
  std::string out = corner;
  for (const auto& c : m.col_labels) out += '\t' + c;
  out += '\n';
  for (Eigen::Index a = 0; a < m.values.rows(); ++a) {
    out += m.row_labels[a];
    for (Eigen::Index b = 0; b < m.values.cols(); ++b) {
      out += '\t' + format_double(m.values(a, b));
    }
    out += '\n';
  }
  return out;
}

std::string interaction_text(const InteractionMatrix& m, const char* title,
                             const char* corner) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{corner};
  for (const auto& c : m.col_labels) head.push_back(c);
  rows.push_back(std::move(head));
  for (Eigen::Index a = 0; a < m.values.rows(); ++a) {
    std::vector<std::string> r{m.row_labels[a] +
                               (m.empty_rows[a] ? " (empty)" : "")};
    for (Eigen::Index b = 0; b < m.values.cols(); ++b) {
      r.push_back(short_number(m.values(a, b)));
    }
    rows.push_back(std::move(r));
  }
  return std::string(title) + "\n" + aligned(rows) + "\n";
}

}  // namespace

std::string manifest_header(const std::string& command) {
  return "# pairgt " PAIRGT_VERSION " " + command;
}

std::vector<std::string> load_keys(const std::string& path, std::size_t n) {
  std::vector<std::string> keys;
  if (!fs::exists(path)) {
    for (std::size_t i = 0; i < n; ++i) keys.push_back(std::to_string(i));
    return keys;
  }
  for (const auto& row : read_table(path)) {
    if (row.size() < 2) {
      throw Error(ErrorCode::kParse, "'" + path + "': expected index and key");
    }
    keys.push_back(row[1]);
  }
  if (keys.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "'" + path + "' lists " + std::to_string(keys.size()) +
                    " keys, expected " + std::to_string(n));
  }
  return keys;
}

// ---------------------------------------------------------------------------
// ingest

std::string cmd_ingest(const Settings& settings, const Stemmer& stem) {
  const RunConfig c = RunConfig::from_settings(settings);
  if (c.corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ingest: corpus is not set");
  }
  const ThreadCorpus corpus = load_corpus(c.corpus);
  const StopWords stopwords =
      c.stopwords.empty() ? StopWords{} : load_stopwords(c.stopwords);
  const TokenizedCorpus tokens = tokenize_corpus(corpus, stopwords, stem);
  const Vocabulary cv = citizen_vocabulary(tokens, c.citizen_cutoff);
  const Vocabulary tv = thread_vocabulary(tokens, c.thread_cutoff);
  const SparseMatrix a = build_adjacency(corpus);
  const SparseMatrix x = build_citizen_terms(corpus, tokens, cv);
  const SparseMatrix y = build_thread_terms(corpus, tokens, tv);
  const auto [xt, yt] = tfidf_weight(corpus, tokens, cv, tv);

  const std::string& dir = c.data_dir;
  save_matrix(in_dir(dir, "adjacency.mtx"), a);
  save_matrix(in_dir(dir, "citizen_terms.mtx"), x);
  save_matrix(in_dir(dir, "thread_terms.mtx"), y);
  save_matrix(in_dir(dir, "citizen_terms_tfidf.mtx"), xt);
  save_matrix(in_dir(dir, "thread_terms_tfidf.mtx"), yt);
  write_file(in_dir(dir, "citizen_vocab.tsv"),
             "term\tdocument_frequency\n" + vocabulary_text(cv));
  write_file(in_dir(dir, "thread_vocab.tsv"),
             "term\tdocument_frequency\n" + vocabulary_text(tv));
  std::string citizens = "index\tkey\n";
  for (std::size_t i = 0; i < corpus.n_citizens(); ++i) {
    citizens += std::to_string(i) + '\t' + corpus.citizens.key(i) + '\n';
  }
  write_file(in_dir(dir, "citizens.tsv"), citizens);
  std::string posts = "index\tkey\twall\n";
  for (std::size_t j = 0; j < corpus.n_posts(); ++j) {
    posts += std::to_string(j) + '\t' + corpus.posts[j].key + '\t' +
             std::to_string(corpus.posts[j].wall) + '\n';
  }
  write_file(in_dir(dir, "posts.tsv"), posts);
  std::string walls = "index\tkey\n";
  for (std::size_t w = 0; w < corpus.walls.size(); ++w) {
    walls += std::to_string(w) + '\t' + corpus.walls.key(w) + '\n';
  }
  write_file(in_dir(dir, "walls.tsv"), walls);
  if (!c.export_corpus.empty()) {
    std::ostringstream out;
    write_corpus(out, corpus);
    write_file(c.export_corpus, out.str());
  }
  write_file(in_dir(dir, "ingest_manifest.txt"),
             manifest_header("ingest") + "\n" + c.to_settings().to_text());

  std::ostringstream r;
  r << "citizens " << corpus.n_citizens() << ", posts " << corpus.n_posts()
    << ", walls " << corpus.walls.size() << ", comments "
    << corpus.comments.size() << "\n"
    << "A: " << a.rows() << " x " << a.cols() << ", " << a.nnz()
    << " nonzeros, total " << format_double(a.total()) << "\n"
    << "X: " << x.rows() << " x " << x.cols() << " (citizen-words)\n"
    << "Y: " << y.rows() << " x " << y.cols() << " (thread-words)\n";
  return r.str();
}

// ---------------------------------------------------------------------------
// fit

FitInputs load_fit_inputs(const RunConfig& config) {
  FitInputs in;
  in.a = load_triplets(in_dir(config.data_dir, "adjacency.mtx"));
  if (config.mode() != SimilarityMode::kGraphOnly) {
    const bool tfidf = config.scaling == Scaling::kTfidf;
    in.x = load_triplets(in_dir(config.data_dir, tfidf
                                                     ? "citizen_terms_tfidf.mtx"
                                                     : "citizen_terms.mtx"));
    in.y = load_triplets(in_dir(config.data_dir, tfidf
                                                     ? "thread_terms_tfidf.mtx"
                                                     : "thread_terms.mtx"));
  }
  return in;
}

void write_fit_outputs(const FitResult& result, const RunConfig& config) {
  const std::string& dir = config.output_dir;
  const auto& cc = result.clusters;
  const auto& e = result.embedding;
  const auto citizen_keys =
      load_keys(in_dir(config.data_dir, "citizens.tsv"), cc.citizen_labels.size());
  const auto post_keys =
      load_keys(in_dir(config.data_dir, "posts.tsv"), cc.post_labels.size());
  write_file(in_dir(dir, "citizen_labels.tsv"),
             labels_table(citizen_keys, cc.citizen_labels,
                          cc.citizen_centrality, cc.citizen_low_confidence));
  write_file(in_dir(dir, "post_labels.tsv"),
             labels_table(post_keys, cc.post_labels, cc.post_centrality,
                          cc.post_low_confidence));
  std::string sv = "k\tsigma\tresidual\n";
  for (Eigen::Index i = 0; i < e.sigma.size(); ++i) {
    sv += std::to_string(i + 1) + '\t' + format_double(e.sigma[i]) + '\t' +
          format_double(e.residuals[i]) + '\n';
  }
  write_file(in_dir(dir, "singular_values.tsv"), sv);
  write_file(in_dir(dir, "embedding_citizens.tsv"),
             embedding_table(citizen_keys, e.u_c, e.zero_rows_c));
  write_file(in_dir(dir, "embedding_posts.tsv"),
             embedding_table(post_keys, e.u_p, e.zero_rows_p));

  const auto& p = result.prepared;
  if (p.thresholded) {
    const auto cterms = load_terms(in_dir(config.data_dir, "citizen_vocab.tsv"),
                                   p.thresholded->rows());
    const auto tterms = load_terms(in_dir(config.data_dir, "thread_vocab.tsv"),
                                   p.thresholded->cols());
    std::string w = "citizen_term\tthread_term\tvalue\n";
    for (const Triplet& t : p.thresholded->triplets()) {
      w += cterms[t.row] + '\t' + tterms[t.col] + '\t' +
           format_double(t.value) + '\n';
    }
    write_file(in_dir(dir, "thresholded_response.tsv"), w);
  }

  std::string m = manifest_header("fit") + "\n";
  m += "# tau_c_resolved = " + format_double(p.laplacian->tau_c()) + "\n";
  m += "# tau_p_resolved = " + format_double(p.laplacian->tau_p()) + "\n";
  m += "# mode = " + std::string(config.mode() == SimilarityMode::kGraphOnly
                                     ? "graph_only"
                                 : config.mode() == SimilarityMode::kTextOnly
                                     ? "text_only"
                                 : config.mode() == SimilarityMode::kAllOne
                                     ? "all_one"
                                     : "combined") +
       "\n";
  if (p.thresholded) {
    m += "# omega = " + format_double(p.omega) + "\n";
    m += "# threshold_population_size = " +
         std::to_string(p.threshold_population) + "\n";
    m += "# thresholded_nonzeros = " + std::to_string(p.thresholded->nnz()) +
         "\n";
  }
  m += "# h_internal = " + format_double(p.h_internal) + "\n";
  m += "# sigma_ref_laplacian = " + format_double(p.sigma_ref_l) + "\n";
  m += "# sigma_ref_text = " + format_double(p.sigma_ref_text) + "\n";
  m += "# svd_iterations = " + std::to_string(e.iterations) + "\n";
  m += "# citizen_inertia = " + format_double(cc.citizen_inertia) + "\n";
  m += "# post_inertia = " + format_double(cc.post_inertia) + "\n";
  m += config.to_settings().to_text();
  write_file(in_dir(dir, "manifest.txt"), m);
}

std::string cmd_fit(const Settings& settings) {
  const RunConfig c = RunConfig::from_settings(settings);
  const FitInputs inputs = load_fit_inputs(c);
  const FitResult r = fit(inputs, c);
  write_fit_outputs(r, c);

  std::ostringstream out;
  out << "singular values:";
  for (Eigen::Index i = 0; i < r.embedding.sigma.size(); ++i) {
    out << ' ' << short_number(r.embedding.sigma[i]);
  }
  out << "\n";
  auto sizes = [](const std::vector<std::size_t>& labels, std::size_t k) {
    std::vector<std::size_t> s(k, 0);
    for (std::size_t l : labels) ++s[l];
    std::string t;
    for (std::size_t v : s) t += ' ' + std::to_string(v);
    return t;
  };
  out << "citizen cluster sizes:" << sizes(r.clusters.citizen_labels, c.k_c)
      << "\n";
  out << "post cluster sizes:" << sizes(r.clusters.post_labels, c.k_p) << "\n";
  const std::string truth_c = in_dir(c.data_dir, "citizen_truth.tsv");
  const std::string truth_p = in_dir(c.data_dir, "post_truth.tsv");
  if (fs::exists(truth_c) && fs::exists(truth_p)) {
    auto read_truth = [](const std::string& path) {
      std::vector<std::size_t> t;
      for (const auto& row : read_table(path)) {
        t.push_back(parse_uint(row.at(1), "cluster") - 1);
      }
      return t;
    };
    out << "mis-clustering rate vs truth: citizens "
        << short_number(misclustering_rate(r.clusters.citizen_labels,
                                           read_truth(truth_c)))
        << ", posts "
        << short_number(
               misclustering_rate(r.clusters.post_labels, read_truth(truth_p)))
        << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// diagnose

std::string cmd_diagnose(const Settings& settings) {
  const RunConfig dc = RunConfig::from_settings(settings);
  const RunConfig fc = RunConfig::from_settings(
      Settings::load(in_dir(dc.fit_dir, "manifest.txt")));
  const std::string& out_dir = dc.output_dir;
  const std::string& data = fc.data_dir;
  std::ostringstream report;

  const LoadedLabels cl = load_labels(in_dir(dc.fit_dir, "citizen_labels.tsv"), fc.k_c);
  const LoadedLabels pl = load_labels(in_dir(dc.fit_dir, "post_labels.tsv"), fc.k_p);
  const SparseMatrix a = load_triplets(in_dir(data, "adjacency.mtx"));

  const InteractionMatrix ps = psi(a, cl.labels, fc.k_c, pl.labels, fc.k_p);
  write_file(in_dir(out_dir, "psi.tsv"), interaction_tsv(ps, "citizen_cluster"));
  report << interaction_text(ps, "Psi (citizen-cluster x post-cluster)", "");

  const std::string posts_path = in_dir(data, "posts.tsv");
  const std::string walls_path = in_dir(data, "walls.tsv");
  if (fs::exists(posts_path) && fs::exists(walls_path)) {
    std::vector<std::size_t> wall_of_post;
    for (const auto& row : read_table(posts_path)) {
      wall_of_post.push_back(parse_uint(row.at(2), "wall"));
    }
    std::vector<std::string> wall_names;
    for (const auto& row : read_table(walls_path)) wall_names.push_back(row.at(1));

    const InteractionMatrix pc =
        psi_c(a, cl.labels, fc.k_c, wall_of_post, wall_names);
    write_file(in_dir(out_dir, "psi_c.tsv"), interaction_tsv(pc, "citizen_cluster"));
    report << interaction_text(pc, "Psi_C (citizen-cluster x wall)", "");
    const InteractionMatrix pp =
        psi_p(pl.labels, fc.k_p, wall_of_post, wall_names);
    write_file(in_dir(out_dir, "psi_p.tsv"), interaction_tsv(pp, "post_cluster"));
    report << interaction_text(pp, "Psi_P (post-cluster x wall)", "");

    const AttentionRatio ar = attention_ratio(a, wall_of_post, wall_names.size(),
                                              derive_seed(dc.seed, "attention"));
    std::string t = "index\tkey\tdegree\tratio\tfocus\tundefined\n";
    for (std::size_t i = 0; i < ar.ratio.size(); ++i) {
      t += std::to_string(i) + '\t' + cl.keys[i] + '\t' +
           format_double(ar.degree[i]) + '\t' + format_double(ar.ratio[i]) +
           '\t' + (ar.undefined[i] ? std::string() : wall_names[ar.focus[i]]) +
           '\t' + (ar.undefined[i] ? "1" : "0") + '\n';
    }
    write_file(in_dir(out_dir, "attention_ratio.tsv"), t);
    const Histogram h =
        attention_histogram(ar, dc.attention_min_degree, dc.histogram_bins);
    std::string ht = "lower\tupper\tcount\n";
    std::vector<std::vector<std::string>> rows{{"ratio bin", "citizens"}};
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      ht += format_double(h.lower[b]) + '\t' + format_double(h.upper[b]) +
            '\t' + std::to_string(h.counts[b]) + '\n';
      rows.push_back({"(" + short_number(h.lower[b]) + ", " +
                          short_number(h.upper[b]) + "]",
                      std::to_string(h.counts[b])});
    }
    write_file(in_dir(out_dir, "attention_histogram.tsv"), ht);
    report << "Attention-ratio histogram (degree >= "
           << short_number(dc.attention_min_degree) << ", " << h.n_included
           << " citizens)\n"
           << aligned(rows) << "\n";
  }

  auto keywords = [&](const char* matrix, const char* vocab,
                      const LoadedLabels& labels, std::size_t k,
                      const char* file, const char* title) {
    const std::string path = in_dir(data, matrix);
    if (!fs::exists(path)) return;
    const SparseMatrix m = load_triplets(path);
    report << title << "\n";
    const auto v = m.values();
    if (std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; })) {
      report << "  skipped: the term matrix holds negative entries, not counts\n\n";
      return;
    }
    const auto terms = load_terms(in_dir(data, vocab), m.cols());
    std::string t = "cluster\trank\tterm\tscore\tobserved\texpected\n";
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(labels.labels.begin(), labels.labels.end(), c) ==
          labels.labels.end()) {
        report << "  cluster " << c + 1 << ": empty\n";
        continue;
      }
      const KeywordTable kt = keyword_scores(m, labels.labels, c, terms, dc.top_n);
      report << "  cluster " << c + 1 << ":";
      for (std::size_t r = 0; r < kt.ranked.size(); ++r) {
        const auto& s = kt.ranked[r];
        t += std::to_string(c + 1) + '\t' + std::to_string(r + 1) + '\t' +
             s.term + '\t' + format_double(s.score) + '\t' +
             format_double(s.observed) + '\t' + format_double(s.expected) + '\n';
        if (r < 10) report << ' ' << s.term;
      }
      report << "\n";
    }
    report << "\n";
    write_file(in_dir(out_dir, file), t);
  };
  keywords("citizen_terms.mtx", "citizen_vocab.tsv", cl, fc.k_c,
           "keywords_citizens.tsv", "Citizen-word keywords");
  keywords("thread_terms.mtx", "thread_vocab.tsv", pl, fc.k_p,
           "keywords_threads.tsv", "Thread-word keywords");

  CoClustering cc;
  cc.citizen_labels = cl.labels;
  cc.post_labels = pl.labels;
  cc.citizen_centrality = cl.centrality;
  cc.post_centrality = pl.centrality;
  cc.citizen_centroids = DenseMatrix::Zero(fc.k_c, 0);
  cc.post_centroids = DenseMatrix::Zero(fc.k_p, 0);
  auto central = [&](Side side, const LoadedLabels& labels, std::size_t k,
                     const char* file) {
    std::string t = "cluster\trank\tindex\tkey\tcentrality\n";
    for (std::size_t c = 0; c < k; ++c) {
      const auto ids = central_members(cc, side, c, dc.top_n);
      for (std::size_t r = 0; r < ids.size(); ++r) {
        t += std::to_string(c + 1) + '\t' + std::to_string(r + 1) + '\t' +
             std::to_string(ids[r]) + '\t' + labels.keys[ids[r]] + '\t' +
             format_double(labels.centrality[ids[r]]) + '\n';
      }
    }
    write_file(in_dir(out_dir, file), t);
  };
  central(Side::kCitizen, cl, fc.k_c, "central_citizens.tsv");
  central(Side::kPost, pl, fc.k_p, "central_posts.tsv");

  const FitInputs inputs = load_fit_inputs(fc);
  const PreparedOperator prepared = build_operator(inputs, fc);
  const std::size_t k_max = std::min(
      dc.scree_k, std::min(prepared.op->rows(), prepared.op->cols()));
  SvdOptions so = fc.svd_options();
  so.seed = derive_seed(fc.seed, "scree");
  const Scree s = scree(*prepared.op, k_max, so);
  std::string st = "k\tsigma\tgap_ratio\n";
  std::vector<std::vector<std::string>> rows{{"k", "sigma", "gap"}};
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    const bool has_gap = i < s.gap_ratio.size();
    st += std::to_string(i + 1) + '\t' + format_double(s.sigma[i]) + '\t' +
          (has_gap ? format_double(s.gap_ratio[i]) : std::string()) + '\n';
    rows.push_back({std::to_string(i + 1), short_number(s.sigma[i]),
                    has_gap ? short_number(s.gap_ratio[i]) : std::string()});
  }
  write_file(in_dir(out_dir, "scree.tsv"), st);
  report << "Scree\n" << aligned(rows);

  write_file(in_dir(out_dir, "diagnose_manifest.txt"),
             manifest_header("diagnose") + "\n" + dc.to_settings().to_text());
  return report.str();
}

// ---------------------------------------------------------------------------
// benchmark

std::string cmd_benchmark(const Settings& settings) {
  const BenchmarkConfig c = BenchmarkConfig::from_settings(settings);
  const BenchmarkResult r = run_benchmark(c);
  write_file(in_dir(c.output_dir, "benchmark.tsv"), benchmark_table(r));
  write_file(in_dir(c.output_dir, "benchmark_timing.tsv"),
             benchmark_timing_table(r));
  std::string failures = "axis\tlog10_signal\tmethod\tmessage\n";
  for (const auto& cell : r.cells) {
    for (const auto& f : cell.failures) {
      failures += std::string(to_string(cell.axis)) + '\t' +
                  format_double(cell.level) + '\t' + cell.method + '\t' + f +
                  '\n';
    }
  }
  write_file(in_dir(c.output_dir, "benchmark_failures.tsv"), failures);
  write_file(in_dir(c.output_dir, "manifest.txt"),
             manifest_header("benchmark") + "\n" + c.to_settings().to_text());

  std::vector<std::vector<std::string>> rows{
      {"axis", "log10", "method", "mean", "std", "reps", "failed"}};
  for (const auto& cell : r.cells) {
    rows.push_back({to_string(cell.axis), short_number(cell.level), cell.method,
                    short_number(cell.mean), short_number(cell.std),
                    std::to_string(cell.rates.size()),
                    std::to_string(cell.failures.size())});
  }
  return aligned(rows);
}

// ---------------------------------------------------------------------------
// simulate

namespace {

struct SimulateConfig {
  std::string model = "ncscbm";
  std::size_t n_c = 400;
  std::size_t n_p = 400;
  std::size_t k = 2;
  double p_in = 0.1;
  double p_out = 0.02;
  std::size_t m_c = 40;
  std::size_t m_p = 40;
  double mean_in = 1.0;
  double mean_out = 0.0;
  double noise = 1.0;
  std::string covariates = "gaussian";
  std::size_t n_docs = 1000;
  std::size_t n_words = 1000;
  double sig_g = 10.0;
  double sig_t = 1.0;
  std::string theta = "ones";
  std::uint64_t seed = 1;
  std::string data_dir = "data";

  static SimulateConfig from_settings(const Settings& s) {
    SimulateConfig c;
    for (const auto& [key, value] : s.entries()) {
      if (key == "seed") {
        c.seed = parse_uint(value, key);
        continue;
      }
      if (key == "data_dir") {
        c.data_dir = value;
        continue;
      }
      if (!key.starts_with("simulate.")) continue;
      const std::string_view k = std::string_view(key).substr(9);
      if (k == "model") c.model = value;
      else if (k == "n_c") c.n_c = parse_uint(value, key);
      else if (k == "n_p") c.n_p = parse_uint(value, key);
      else if (k == "k") c.k = parse_uint(value, key);
      else if (k == "p_in") c.p_in = parse_double(value, key);
      else if (k == "p_out") c.p_out = parse_double(value, key);
      else if (k == "m_c") c.m_c = parse_uint(value, key);
      else if (k == "m_p") c.m_p = parse_uint(value, key);
      else if (k == "mean_in") c.mean_in = parse_double(value, key);
      else if (k == "mean_out") c.mean_out = parse_double(value, key);
      else if (k == "noise") c.noise = parse_double(value, key);
      else if (k == "covariates") c.covariates = value;
      else if (k == "n_docs") c.n_docs = parse_uint(value, key);
      else if (k == "n_words") c.n_words = parse_uint(value, key);
      else if (k == "sig_g") c.sig_g = parse_double(value, key);
      else if (k == "sig_t") c.sig_t = parse_double(value, key);
      else if (k == "theta") c.theta = value;
      else {
        throw Error(ErrorCode::kInvalidArgument,
                    "config: unknown key '" + key + "'");
      }
    }
    if (c.model != "ncscbm" && c.model != "dcsbm") {
      throw Error(ErrorCode::kInvalidArgument,
                  "config: simulate.model must be ncscbm or dcsbm");
    }
    if (c.covariates != "gaussian" && c.covariates != "bernoulli") {
      throw Error(ErrorCode::kInvalidArgument,
                  "config: simulate.covariates must be gaussian or bernoulli");
    }
    if (c.theta != "ones" && c.theta != "power_law") {
      throw Error(ErrorCode::kInvalidArgument,
                  "config: simulate.theta must be ones or power_law");
    }
    return c;
  }

  Settings to_settings() const {
    Settings s;
    s.set("simulate.model", model);
    s.set("seed", std::to_string(seed));
    s.set("data_dir", data_dir);
    if (model == "ncscbm") {
      s.set("simulate.n_c", std::to_string(n_c));
      s.set("simulate.n_p", std::to_string(n_p));
      s.set("simulate.k", std::to_string(k));
      s.set("simulate.p_in", format_double(p_in));
      s.set("simulate.p_out", format_double(p_out));
      s.set("simulate.m_c", std::to_string(m_c));
      s.set("simulate.m_p", std::to_string(m_p));
      s.set("simulate.mean_in", format_double(mean_in));
      s.set("simulate.mean_out", format_double(mean_out));
      s.set("simulate.noise", format_double(noise));
      s.set("simulate.covariates", covariates);
    } else {
      s.set("simulate.n_docs", std::to_string(n_docs));
      s.set("simulate.n_words", std::to_string(n_words));
      s.set("simulate.sig_g", format_double(sig_g));
      s.set("simulate.sig_t", format_double(sig_t));
      s.set("simulate.theta", theta);
    }
    return s;
  }
};

std::string truth_table(const std::vector<std::size_t>& labels) {
  std::string t = "index\tcluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    t += std::to_string(i) + '\t' + std::to_string(labels[i] + 1) + '\n';
  }
  return t;
}

}  // namespace

std::string cmd_simulate(const Settings& settings) {
  const SimulateConfig c = SimulateConfig::from_settings(settings);
  const std::string& dir = c.data_dir;
  std::ostringstream report;
  if (c.model == "ncscbm") {
    BlockModelSpec spec =
        planted_block_model(c.n_c, c.n_p, c.k, c.p_in, c.p_out, c.m_c, c.m_p,
                            c.mean_in, c.mean_out, c.noise);
    spec.covariates = c.covariates == "bernoulli" ? CovariateLaw::kBernoulli
                                                  : CovariateLaw::kGaussian;
    const NcScbmSample s = sample_ncscbm(spec, c.seed);
    save_matrix(in_dir(dir, "adjacency.mtx"), s.a);
    save_matrix(in_dir(dir, "citizen_terms.mtx"), s.x);
    save_matrix(in_dir(dir, "thread_terms.mtx"), s.y);
    write_file(in_dir(dir, "citizen_truth.tsv"), truth_table(s.citizen_labels));
    write_file(in_dir(dir, "post_truth.tsv"), truth_table(s.post_labels));
    report << "NC-ScBM: A " << s.a.rows() << " x " << s.a.cols() << " with "
           << s.a.nnz() << " edges, X " << s.x.rows() << " x " << s.x.cols()
           << ", Y " << s.y.rows() << " x " << s.y.cols() << "\n";
  } else {
    DcsbmDocsSpec spec;
    spec.n_docs = c.n_docs;
    spec.n_words = c.n_words;
    spec.sig_g = c.sig_g;
    spec.sig_t = c.sig_t;
    spec.theta = c.theta == "power_law" ? ThetaLaw::kPowerLaw : ThetaLaw::kOnes;
    const DcsbmDocsSample s = sample_dcsbm_docs(spec, c.seed);
    save_matrix(in_dir(dir, "adjacency.mtx"), s.a);
    save_matrix(in_dir(dir, "citizen_terms.mtx"), s.x);
    save_matrix(in_dir(dir, "thread_terms.mtx"), s.x);
    write_file(in_dir(dir, "citizen_truth.tsv"), truth_table(s.labels));
    write_file(in_dir(dir, "post_truth.tsv"), truth_table(s.labels));
    report << "DCSBM documents: " << s.a.rows() << " documents, "
           << s.a.nnz() / 2 << " links, " << s.x.nnz() << " word occurrences\n";
  }
  write_file(in_dir(dir, "simulate_manifest.txt"),
             manifest_header("simulate") + "\n" + c.to_settings().to_text());
  return report.str();
}

}  // namespace pairgt
