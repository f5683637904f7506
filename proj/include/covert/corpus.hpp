// Copyright 2026 The Covert Authors. All Rights Reserved.
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

#ifndef COVERT_CORPUS_HPP_
#define COVERT_CORPUS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "covert/kernels.hpp"

namespace covert {

/// Coarse part-of-speech tagset.
enum class Pos { kNoun, kVerb, kAdj, kDet, kPron, kAdv, kPrep, kConj, kNum, kPunct, kOther };

std::string_view pos_name(Pos pos);

/// Accepts the coarse names above (NOUN, VERB, ...) plus the common
/// Universal Dependencies aliases (PROPN, AUX, ADP, CCONJ, SCONJ, PART, X, ...).
std::optional<Pos> parse_pos(std::string_view tag);

struct Token {
  std::string surface;
  std::string lemma;  // lowercased
  Pos pos = Pos::kOther;
};

struct SentenceRef {
  std::string doc_id;
  std::size_t index = 0;

  auto operator<=>(const SentenceRef&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string doc_id;
  std::size_t index = 0;

  SentenceRef ref() const { return {doc_id, index}; }
};

enum class CorpusFormat { kVertical, kPlain };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Single-pass reader over a corpus stream.
///
/// Vertical: one `surface<TAB>lemma<TAB>pos` record per line, a blank line
/// ends a sentence, `#doc <id>` starts a document.
/// Plain: one whitespace-tokenized sentence per line; lemma is the
/// lowercased surface and pos is OTHER, or PUNCT for punctuation-only tokens.
/// Both formats accept `#doc <id>`. Sentences seen before any `#doc` line
/// belong to a document named after the source.
class CorpusReader {
 public:
  CorpusReader(std::istream& in, CorpusFormat format, std::string source_name);

  /// Reads the next sentence into `out`. Returns false at end of input.
  /// Throws FormatError naming the offending line.
  bool next(Sentence& out);

 private:
  bool next_vertical(Sentence& out);
  bool next_plain(Sentence& out);
  void start_document(std::string_view line);

  std::istream& in_;
  CorpusFormat format_;
  std::string source_;
  std::string doc_id_;
  std::size_t sentence_index_ = 0;
  std::size_t line_no_ = 0;
  std::optional<std::string> pending_directive_;
};

struct Corpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const;
  const Sentence* find(const SentenceRef& ref) const;
};

Corpus read_corpus(std::istream& in, CorpusFormat format, const std::string& source_name);

/// Throws IoError when `path` cannot be opened.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Plain-mode tokenization of one line.
std::vector<Token> tokenize_plain(std::string_view line);

std::string to_lower(std::string_view text);

using WordId = std::uint32_t;

/// Frequency-capped lemma vocabulary. Ids are dense and ordered by
/// descending count, ties broken by ascending lemma.
class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  Vocabulary() = default;

  /// Keeps the top `max_size` lemmas with count >= `min_count`.
  static Vocabulary from_counts(const LemmaCounts& counts, std::size_t max_size,
                                std::uint64_t min_count, std::uint64_t total_tokens);

  /// Adopts entries in the given order; they must already satisfy the
  /// ordering invariant. Throws ContractViolation otherwise.
  static Vocabulary from_entries(std::vector<Entry> entries, std::size_t max_size);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t max_size() const noexcept { return max_size_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }

  std::optional<WordId> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }
  const std::string& word(WordId id) const { return entries_.at(id).word; }
  std::uint64_t count(WordId id) const { return entries_.at(id).count; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// In-vocabulary lemmas in ascending lexicographic order.
  std::vector<std::string> alphabetical() const;

 private:
  void reindex();

  std::vector<Entry> entries_;
  std::unordered_map<std::string, WordId> index_;
  std::size_t max_size_ = 0;
  std::uint64_t total_tokens_ = 0;
};

/// Throws ContractViolation when max_size or min_count is zero.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t max_size, std::uint64_t min_count,
                            ExecutionMode mode = ExecutionMode::kSerial);

/// Sentence-internal successor counts: rows[w][u] = times u directly follows w.
class NextWordCounts {
 public:
  using Row = std::map<std::string, std::uint64_t>;

  const std::map<std::string, Row>& rows() const noexcept { return rows_; }
  const Row* row(std::string_view word) const;

  /// The row for `word` laid out over `columns`; unknown words give zeros.
  std::vector<std::uint64_t> dense_row(std::string_view word,
                                       const std::vector<std::string>& columns) const;

  void add(const std::string& focus, const std::string& next) { ++rows_[focus][next]; }

 private:
  std::map<std::string, Row> rows_;
};

NextWordCounts next_word_counts(const Corpus& corpus, const Vocabulary& vocab);

}  // namespace covert

#endif  // COVERT_CORPUS_HPP_
