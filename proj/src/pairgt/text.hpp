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

// Discussion-thread corpus: parsing, tokenization, vocabularies, and the
// adjacency / document-term matrices built from it.

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pairgt/sparse.hpp"

namespace pairgt {

/// Dense ids for external string keys, in order of first appearance.
class KeyMap {
 public:
  /// Returns the id of `key`, inserting it if new.
  std::size_t intern(std::string_view key);
  /// Returns the id of `key` or npos.
  std::size_t find(std::string_view key) const;
  const std::string& key(std::size_t id) const { return keys_.at(id); }
  const std::vector<std::string>& keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Post {
  std::string key;
  std::size_t wall = 0;
  std::string author;
  std::string text;
};

struct Comment {
  std::string key;
  std::size_t citizen = 0;
  std::size_t post = 0;
  std::string text;
};

struct ThreadCorpus {
  std::vector<Post> posts;
  std::vector<Comment> comments;
  KeyMap post_keys;
  KeyMap citizens;
  KeyMap walls;

  std::size_t n_citizens() const { return citizens.size(); }
  std::size_t n_posts() const { return posts.size(); }
  /// Wall id of every post.
  std::vector<std::size_t> wall_of_post() const;
};

/// Parses the tab-separated record format documented in docs/formats.md.
/// Throws Error(kParse) with the line number for malformed records and
/// "no records" when the input holds none.
ThreadCorpus read_corpus(std::istream& in, const std::string& source);
ThreadCorpus load_corpus(const std::string& path);
/// Writes records in internal-id order; read_corpus(write_corpus(c)) gives
/// the same ids and texts.
void write_corpus(std::ostream& out, const ThreadCorpus& corpus);

using Stemmer = std::function<std::string(std::string_view)>;
using StopWords = std::unordered_set<std::string>;

std::string identity_stem(std::string_view token);
StopWords load_stopwords(const std::string& path);

/// Splits `text` into maximal runs of Unicode letters and numbers, drops
/// runs containing any number, lowercases the rest, removes stopwords and
/// maps each survivor through `stem`. Order is preserved.
std::vector<std::string> tokenize(std::string_view text,
                                  const StopWords& stopwords,
                                  const Stemmer& stem = identity_stem);

struct TokenizedCorpus {
  std::vector<std::vector<std::string>> post_tokens;
  std::vector<std::vector<std::string>> comment_tokens;
};

TokenizedCorpus tokenize_corpus(const ThreadCorpus& corpus,
                                const StopWords& stopwords,
                                const Stemmer& stem = identity_stem);

struct Vocabulary {
  std::vector<std::string> terms;          // lexicographic
  std::vector<std::size_t> doc_frequency;  // parallel to terms
  double cutoff = 0.001;
  std::size_t n_documents = 0;

  std::size_t size() const { return terms.size(); }
  /// Minimum document frequency a term needs: ceil(cutoff * n_documents),
  /// at least 1.
  std::size_t min_documents() const;
  /// Column of `term` or KeyMap::npos.
  std::size_t find(std::string_view term) const;
};

/// Keeps every term contained in at least ceil(cutoff * n_docs) documents.
Vocabulary build_vocabulary(
    const std::vector<const std::vector<std::string>*>& documents,
    double cutoff);
/// Citizen-words: documents are the comments.
Vocabulary citizen_vocabulary(const TokenizedCorpus& tokens, double cutoff);
/// Thread-words: documents are the posts and the comments, each text counted
/// separately.
Vocabulary thread_vocabulary(const TokenizedCorpus& tokens, double cutoff);

std::string vocabulary_text(const Vocabulary& vocab);

/// A_ij = number of comments by citizen i on post j.
SparseMatrix build_adjacency(const ThreadCorpus& corpus);
/// X_ij = number of comments by citizen i that contain term j.
SparseMatrix build_citizen_terms(const ThreadCorpus& corpus,
                                 const TokenizedCorpus& tokens,
                                 const Vocabulary& vocab);
/// Y_ij = 1{post i contains j} + number of comments under post i containing j.
SparseMatrix build_thread_terms(const ThreadCorpus& corpus,
                                const TokenizedCorpus& tokens,
                                const Vocabulary& vocab);

/// (occurrences / document length) * log2(n_docs / doc_freq) over all posts
/// and comments. Citizen rows sum their comments' rows; post rows are the
/// post text alone.
std::pair<SparseMatrix, SparseMatrix> tfidf_weight(
    const ThreadCorpus& corpus, const TokenizedCorpus& tokens,
    const Vocabulary& citizen_vocab, const Vocabulary& thread_vocab);

}  // namespace pairgt
