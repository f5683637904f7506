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

#include "covert/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "covert/error.hpp"

namespace covert {

namespace {

constexpr std::array<std::pair<std::string_view, Pos>, 27> kPosNames{{
    {"NOUN", Pos::kNoun},  {"VERB", Pos::kVerb},   {"ADJ", Pos::kAdj},    {"DET", Pos::kDet},
    {"PRON", Pos::kPron},  {"ADV", Pos::kAdv},     {"PREP", Pos::kPrep},  {"CONJ", Pos::kConj},
    {"NUM", Pos::kNum},    {"PUNCT", Pos::kPunct}, {"OTHER", Pos::kOther},
    // Universal Dependencies aliases.
    {"PROPN", Pos::kNoun}, {"AUX", Pos::kVerb},    {"ADP", Pos::kPrep},   {"CCONJ", Pos::kConj},
    {"SCONJ", Pos::kConj}, {"PART", Pos::kPrep},   {"INTJ", Pos::kOther}, {"SYM", Pos::kOther},
    {"X", Pos::kOther},    {"N", Pos::kNoun},      {"V", Pos::kVerb},     {"A", Pos::kAdj},
    {"P", Pos::kPrep},     {"D", Pos::kDet},       {"PUN", Pos::kPunct},  {"CRD", Pos::kNum},
}};

// UTF-8 punctuation marks common in English corpora.
constexpr std::array<std::string_view, 10> kUtf8Punct{
    "‘", "’", "“", "”", "…", "–", "—", "«", "»",
    "·"};

bool punctuation_only(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      if (!std::ispunct(c)) return false;
      ++i;
      continue;
    }
    auto it = std::find_if(kUtf8Punct.begin(), kUtf8Punct.end(),
                           [&](std::string_view p) { return text.substr(i).starts_with(p); });
    if (it == kUtf8Punct.end()) return false;
    i += it->size();
  }
  return true;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_doc_directive(std::string_view line) {
  return line == "#doc" || line.starts_with("#doc ") || line.starts_with("#doc\t");
}

}  // namespace

std::string_view pos_name(Pos pos) {
  for (const auto& [name, p] : kPosNames)
    if (p == pos) return name;
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view tag) {
  for (const auto& [name, p] : kPosNames)
    if (name == tag) return p;
  return std::nullopt;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "vertical") return CorpusFormat::kVertical;
  if (name == "plain") return CorpusFormat::kPlain;
  return std::nullopt;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out)
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
  return out;
}

std::vector<Token> tokenize_plain(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) {
      auto surface = line.substr(start, i - start);
      tokens.push_back(
          {std::string(surface), to_lower(surface), punctuation_only(surface) ? Pos::kPunct : Pos::kOther});
    }
  }
  return tokens;
}

CorpusReader::CorpusReader(std::istream& in, CorpusFormat format, std::string source_name)
    : in_(in), format_(format), source_(std::move(source_name)) {
  doc_id_ = std::filesystem::path(source_).stem().string();
  if (doc_id_.empty()) doc_id_ = "doc";
}

void CorpusReader::start_document(std::string_view line) {
  auto id = line.substr(4);
  while (!id.empty() && (id.front() == ' ' || id.front() == '\t')) id.remove_prefix(1);
  while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.remove_suffix(1);
  if (id.empty()) throw FormatError(source_, line_no_, "#doc directive without an id");
  doc_id_ = std::string(id);
  sentence_index_ = 0;
}

bool CorpusReader::next(Sentence& out) {
  return format_ == CorpusFormat::kVertical ? next_vertical(out) : next_plain(out);
}

bool CorpusReader::next_vertical(Sentence& out) {
  out.tokens.clear();
  std::string line;
  while (true) {
    if (pending_directive_) {
      start_document(*pending_directive_);
      pending_directive_.reset();
      continue;
    }
    if (!std::getline(in_, line)) break;
    ++line_no_;
    strip_cr(line);
    if (line.empty()) {
      if (out.tokens.empty()) continue;
      break;
    }
    if (is_doc_directive(line)) {
      // A directive directly after tokens closes the sentence under the old id.
      if (!out.tokens.empty()) {
        pending_directive_ = line;
        break;
      }
      start_document(line);
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw FormatError(source_, line_no_,
                        "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty())
      throw FormatError(source_, line_no_, "empty surface or lemma");
    auto pos = parse_pos(fields[2]);
    if (!pos) throw FormatError(source_, line_no_, "unknown POS tag '" + std::string(fields[2]) + "'");
    out.tokens.push_back({std::string(fields[0]), to_lower(fields[1]), *pos});
  }
  if (out.tokens.empty()) return false;
  out.doc_id = doc_id_;
  out.index = sentence_index_++;
  return true;
}

bool CorpusReader::next_plain(Sentence& out) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    strip_cr(line);
    if (is_doc_directive(line)) {
      start_document(line);
      continue;
    }
    auto tokens = tokenize_plain(line);
    if (tokens.empty()) continue;
    out.tokens = std::move(tokens);
    out.doc_id = doc_id_;
    out.index = sentence_index_++;
    return true;
  }
  return false;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

const Sentence* Corpus::find(const SentenceRef& ref) const {
  for (const auto& s : sentences)
    if (s.doc_id == ref.doc_id && s.index == ref.index) return &s;
  return nullptr;
}

Corpus read_corpus(std::istream& in, CorpusFormat format, const std::string& source_name) {
  Corpus corpus;
  CorpusReader reader(in, format, source_name);
  Sentence s;
  while (reader.next(s)) corpus.sentences.push_back(s);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  return read_corpus(in, format, path.string());
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::from_counts(const LemmaCounts& counts, std::size_t max_size,
                                   std::uint64_t min_count, std::uint64_t total_tokens) {
  if (max_size == 0) throw ContractViolation("vocabulary max_size must be >= 1");
  if (min_count == 0) throw ContractViolation("vocabulary min_count must be >= 1");
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [word, c] : counts)
    if (c >= min_count) entries.push_back({word, c});
  auto order = [](const Entry& a, const Entry& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  };
  if (entries.size() > max_size) {
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(max_size),
                      entries.end(), order);
    entries.resize(max_size);
  } else {
    std::sort(entries.begin(), entries.end(), order);
  }
  Vocabulary v;
  v.entries_ = std::move(entries);
  v.max_size_ = max_size;
  v.total_tokens_ = total_tokens;
  v.reindex();
  return v;
}

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries, std::size_t max_size) {
  if (entries.size() > max_size) throw ContractViolation("vocabulary larger than its cap");
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& a = entries[i - 1];
    const auto& b = entries[i];
    if (a.count < b.count || (a.count == b.count && !(a.word < b.word)))
      throw ContractViolation("vocabulary entries out of order at '" + b.word + "'");
  }
  Vocabulary v;
  v.entries_ = std::move(entries);
  v.max_size_ = max_size;
  for (const auto& e : v.entries_) v.total_tokens_ += e.count;
  v.reindex();
  return v;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    index_.emplace(entries_[i].word, static_cast<WordId>(i));
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Vocabulary::alphabetical() const {
  std::vector<std::string> words;
  words.reserve(entries_.size());
  for (const auto& e : entries_) words.push_back(e.word);
  std::sort(words.begin(), words.end());
  return words;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t max_size, std::uint64_t min_count,
                            ExecutionMode mode) {
  auto counts = kernels::count_lemmas(corpus.sentences, mode);
  return Vocabulary::from_counts(counts, max_size, min_count, corpus.token_count());
}

// ---------------------------------------------------------------------------
// NextWordCounts

const NextWordCounts::Row* NextWordCounts::row(std::string_view word) const {
  auto it = rows_.find(std::string(word));
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> NextWordCounts::dense_row(std::string_view word,
                                                     const std::vector<std::string>& columns) const {
  std::vector<std::uint64_t> dense(columns.size(), 0);
  const Row* r = row(word);
  if (!r) return dense;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    auto it = r->find(columns[i]);
    if (it != r->end()) dense[i] = it->second;
  }
  return dense;
}

NextWordCounts next_word_counts(const Corpus& corpus, const Vocabulary& vocab) {
  NextWordCounts counts;
  for (const auto& s : corpus.sentences) {
    for (std::size_t i = 0; i + 1 < s.tokens.size(); ++i) {
      const auto& focus = s.tokens[i].lemma;
      const auto& next = s.tokens[i + 1].lemma;
      if (vocab.contains(focus) && vocab.contains(next)) counts.add(focus, next);
    }
  }
  return counts;
}

}  // namespace covert
