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

#include "pairgt/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

// ---------------------------------------------------------------------------
// KeyMap

std::size_t KeyMap::intern(std::string_view key) {
  auto it = index_.find(std::string(key));
  if (it != index_.end()) return it->second;
  const std::size_t id = keys_.size();
  keys_.emplace_back(key);
  index_.emplace(keys_.back(), id);
  return id;
}

std::size_t KeyMap::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  return it == index_.end() ? npos : it->second;
}

std::vector<std::size_t> ThreadCorpus::wall_of_post() const {
  std::vector<std::size_t> walls_out;
  walls_out.reserve(posts.size());
  for (const auto& p : posts) walls_out.push_back(p.wall);
  return walls_out;
}

// ---------------------------------------------------------------------------
// Corpus records

namespace {

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      switch (s[i + 1]) {
        case 't': out += '\t'; ++i; continue;
        case 'n': out += '\n'; ++i; continue;
        case 'r': out += '\r'; ++i; continue;
        case '\\': out += '\\'; ++i; continue;
        default: break;
      }
    }
    out += s[i];
  }
  return out;
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

struct PendingComment {
  std::string key;
  std::string parent;
  std::string author;
  std::string text;
  std::size_t line = 0;
};

}  // namespace

ThreadCorpus read_corpus(std::istream& in, const std::string& source) {
  ThreadCorpus corpus;
  std::vector<PendingComment> pending;
  std::unordered_set<std::string> comment_keys;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::kParse,
                 source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    // The text field is everything after the fourth tab.
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (int k = 0; k < 4; ++k) {
      auto pos = rest.find('\t');
      if (pos == std::string_view::npos) {
        throw fail("expected 5 tab-separated fields (kind, id, parent, "
                   "author, text)");
      }
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    const std::string kind(f[0]);
    const std::string id(f[1]);
    if (id.empty()) throw fail("empty id");
    if (kind == "post") {
      if (f[2].empty()) throw fail("post without a wall id");
      if (corpus.post_keys.find(id) != KeyMap::npos) {
        throw fail("duplicate post id '" + id + "'");
      }
      corpus.post_keys.intern(id);
      Post p;
      p.key = id;
      p.wall = corpus.walls.intern(f[2]);
      p.author = std::string(f[3]);
      p.text = unescape(f[4]);
      corpus.posts.push_back(std::move(p));
    } else if (kind == "comment") {
      if (f[3].empty()) throw fail("comment without an author");
      if (!comment_keys.insert(id).second) {
        throw fail("duplicate comment id '" + id + "'");
      }
      pending.push_back({id, std::string(f[2]), std::string(f[3]),
                         unescape(f[4]), line_no});
    } else {
      throw fail("unknown record kind '" + kind + "'");
    }
  }
  if (corpus.posts.empty() && pending.empty()) {
    throw Error(ErrorCode::kParse, source + ": no records");
  }
  corpus.comments.reserve(pending.size());
  for (auto& pc : pending) {
    const std::size_t post = corpus.post_keys.find(pc.parent);
    if (post == KeyMap::npos) {
      line_no = pc.line;
      throw fail("comment '" + pc.key + "' references unknown post '" +
                 pc.parent + "'");
    }
    Comment c;
    c.key = std::move(pc.key);
    c.citizen = corpus.citizens.intern(pc.author);
    c.post = post;
    c.text = std::move(pc.text);
    corpus.comments.push_back(std::move(c));
  }
  return corpus;
}

ThreadCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_corpus(in, path);
}

void write_corpus(std::ostream& out, const ThreadCorpus& corpus) {
  for (const auto& p : corpus.posts) {
    out << "post\t" << p.key << '\t' << corpus.walls.key(p.wall) << '\t'
        << p.author << '\t' << escape(p.text) << '\n';
  }
  for (const auto& c : corpus.comments) {
    out << "comment\t" << c.key << '\t' << corpus.posts[c.post].key << '\t'
        << corpus.citizens.key(c.citizen) << '\t' << escape(c.text) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Tokens

std::string identity_stem(std::string_view token) { return std::string(token); }

StopWords load_stopwords(const std::string& path) {
  StopWords words;
  const std::string content = read_file(path);
  for (auto line : split(content, '\n')) {
    auto w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    // Stopwords go through the same normalization as text.
    for (auto& t : tokenize(w, {}, identity_stem)) words.insert(t);
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const StopWords& stopwords,
                                  const Stemmer& stem) {
  std::vector<std::string> tokens;
  std::string current;
  bool has_number = false;
  auto flush = [&] {
    if (!current.empty() && !has_number && !stopwords.contains(current)) {
      std::string s = stem ? stem(current) : current;
      if (!s.empty()) tokens.push_back(std::move(s));
    }
    current.clear();
    has_number = false;
  };
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) {
      flush();
      continue;
    }
    const int8_t type = u_charType(c);
    const bool letter = type == U_UPPERCASE_LETTER ||
                        type == U_LOWERCASE_LETTER ||
                        type == U_TITLECASE_LETTER ||
                        type == U_MODIFIER_LETTER || type == U_OTHER_LETTER;
    const bool number = type == U_DECIMAL_DIGIT_NUMBER ||
                        type == U_LETTER_NUMBER || type == U_OTHER_NUMBER;
    const bool mark = type == U_NON_SPACING_MARK ||
                      type == U_COMBINING_SPACING_MARK ||
                      type == U_ENCLOSING_MARK;
    if (letter || number || (mark && !current.empty())) {
      if (number) has_number = true;
      const UChar32 lower = u_tolower(c);
      uint8_t buf[U8_MAX_LENGTH];
      int32_t n = 0;
      U8_APPEND_UNSAFE(buf, n, lower);
      current.append(reinterpret_cast<const char*>(buf), n);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenizedCorpus tokenize_corpus(const ThreadCorpus& corpus,
                                const StopWords& stopwords,
                                const Stemmer& stem) {
  TokenizedCorpus t;
  t.post_tokens.reserve(corpus.posts.size());
  for (const auto& p : corpus.posts) {
    t.post_tokens.push_back(tokenize(p.text, stopwords, stem));
  }
  t.comment_tokens.reserve(corpus.comments.size());
  for (const auto& c : corpus.comments) {
    t.comment_tokens.push_back(tokenize(c.text, stopwords, stem));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Vocabulary

std::size_t Vocabulary::min_documents() const {
  const double raw = cutoff * static_cast<double>(n_documents);
  // Guard against 0.001 * 1000 landing a hair above 1.
  const double need = std::ceil(raw - 1e-9 * std::max(1.0, raw));
  return std::max<std::size_t>(1, static_cast<std::size_t>(need));
}

std::size_t Vocabulary::find(std::string_view term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return KeyMap::npos;
  return static_cast<std::size_t>(it - terms.begin());
}

Vocabulary build_vocabulary(
    const std::vector<const std::vector<std::string>*>& documents,
    double cutoff) {
  if (!(cutoff > 0.0 && cutoff <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "vocabulary cutoff must lie in (0, 1], got " +
                    format_double(cutoff));
  }
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto* doc : documents) {
    std::set<std::string_view> seen(doc->begin(), doc->end());
    for (auto term : seen) {
      auto it = df.find(term);
      if (it == df.end()) {
        df.emplace(std::string(term), 1);
      } else {
        ++it->second;
      }
    }
  }
  Vocabulary v;
  v.cutoff = cutoff;
  v.n_documents = documents.size();
  const std::size_t need = v.min_documents();
  for (const auto& [term, count] : df) {
    if (count >= need) {
      v.terms.push_back(term);
      v.doc_frequency.push_back(count);
    }
  }
  return v;
}

Vocabulary citizen_vocabulary(const TokenizedCorpus& tokens, double cutoff) {
  std::vector<const std::vector<std::string>*> docs;
  docs.reserve(tokens.comment_tokens.size());
  for (const auto& d : tokens.comment_tokens) docs.push_back(&d);
  return build_vocabulary(docs, cutoff);
}

Vocabulary thread_vocabulary(const TokenizedCorpus& tokens, double cutoff) {
  std::vector<const std::vector<std::string>*> docs;
  docs.reserve(tokens.post_tokens.size() + tokens.comment_tokens.size());
  for (const auto& d : tokens.post_tokens) docs.push_back(&d);
  for (const auto& d : tokens.comment_tokens) docs.push_back(&d);
  return build_vocabulary(docs, cutoff);
}

std::string vocabulary_text(const Vocabulary& vocab) {
  std::string out;
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    out += vocab.terms[j];
    out += '\t';
    out += std::to_string(vocab.doc_frequency[j]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

namespace {

// Distinct vocabulary columns contained in a token list, ascending.
std::vector<std::size_t> contained_terms(const std::vector<std::string>& doc,
                                         const Vocabulary& vocab) {
  std::vector<std::size_t> cols;
  for (const auto& t : doc) {
    const std::size_t j = vocab.find(t);
    if (j != KeyMap::npos) cols.push_back(j);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

}  // namespace

SparseMatrix build_adjacency(const ThreadCorpus& corpus) {
  std::vector<Triplet> t;
  t.reserve(corpus.comments.size());
  for (const auto& c : corpus.comments) t.push_back({c.citizen, c.post, 1.0});
  return build_sparse(std::move(t), corpus.n_citizens(), corpus.n_posts());
}

SparseMatrix build_citizen_terms(const ThreadCorpus& corpus,
                                 const TokenizedCorpus& tokens,
                                 const Vocabulary& vocab) {
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < corpus.comments.size(); ++k) {
    for (auto j : contained_terms(tokens.comment_tokens[k], vocab)) {
      t.push_back({corpus.comments[k].citizen, j, 1.0});
    }
  }
  return build_sparse(std::move(t), corpus.n_citizens(), vocab.size());
}

SparseMatrix build_thread_terms(const ThreadCorpus& corpus,
                                const TokenizedCorpus& tokens,
                                const Vocabulary& vocab) {
  std::vector<Triplet> t;
  for (std::size_t p = 0; p < corpus.posts.size(); ++p) {
    for (auto j : contained_terms(tokens.post_tokens[p], vocab)) {
      t.push_back({p, j, 1.0});
    }
  }
  for (std::size_t k = 0; k < corpus.comments.size(); ++k) {
    for (auto j : contained_terms(tokens.comment_tokens[k], vocab)) {
      t.push_back({corpus.comments[k].post, j, 1.0});
    }
  }
  return build_sparse(std::move(t), corpus.n_posts(), vocab.size());
}

std::pair<SparseMatrix, SparseMatrix> tfidf_weight(
    const ThreadCorpus& corpus, const TokenizedCorpus& tokens,
    const Vocabulary& citizen_vocab, const Vocabulary& thread_vocab) {
  // Document frequency over every text, restricted to the terms we need.
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& t : citizen_vocab.terms) df.emplace(t, 0);
  for (const auto& t : thread_vocab.terms) df.emplace(t, 0);
  auto count_doc = [&](const std::vector<std::string>& doc) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto term : seen) {
      auto it = df.find(std::string(term));
      if (it != df.end()) ++it->second;
    }
  };
  for (const auto& d : tokens.post_tokens) count_doc(d);
  for (const auto& d : tokens.comment_tokens) count_doc(d);
  const double n_docs = static_cast<double>(tokens.post_tokens.size() +
                                            tokens.comment_tokens.size());

  auto doc_weights = [&](const std::vector<std::string>& doc,
                         const Vocabulary& vocab) {
    std::map<std::size_t, double> occurrences;
    for (const auto& t : doc) {
      const std::size_t j = vocab.find(t);
      if (j != KeyMap::npos) occurrences[j] += 1.0;
    }
    std::vector<std::pair<std::size_t, double>> w;
    const double len = static_cast<double>(doc.size());
    for (const auto& [j, count] : occurrences) {
      const double freq = static_cast<double>(df.at(vocab.terms[j]));
      const double value = (count / len) * std::log2(n_docs / freq);
      if (value != 0.0) w.emplace_back(j, value);
    }
    return w;
  };

  std::vector<Triplet> xt;
  for (std::size_t k = 0; k < corpus.comments.size(); ++k) {
    for (const auto& [j, v] :
         doc_weights(tokens.comment_tokens[k], citizen_vocab)) {
      xt.push_back({corpus.comments[k].citizen, j, v});
    }
  }
  std::vector<Triplet> yt;
  for (std::size_t p = 0; p < corpus.posts.size(); ++p) {
    for (const auto& [j, v] : doc_weights(tokens.post_tokens[p], thread_vocab)) {
      yt.push_back({p, j, v});
    }
  }
  return {build_sparse(std::move(xt), corpus.n_citizens(), citizen_vocab.size()),
          build_sparse(std::move(yt), corpus.n_posts(), thread_vocab.size())};
}

}  // namespace pairgt
