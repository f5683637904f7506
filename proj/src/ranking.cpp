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

#include "covert/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "covert/error.hpp"
#include "covert/vectorspace.hpp"

namespace covert {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> f;
  std::size_t pos = 0;
  for (;;) {
    auto tab = line.find('\t', pos);
    f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
    if (tab == std::string::npos) return f;
    pos = tab + 1;
  }
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kViable: return "Viable";
    case Label::kRejected: return "Rejected";
    case Label::kDiscarded: return "Discarded";
    case Label::kNotInVocabulary: return "NotInVocabulary";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view name) {
  if (name == "Viable") return Label::kViable;
  if (name == "Rejected") return Label::kRejected;
  if (name == "Discarded") return Label::kDiscarded;
  if (name == "NotInVocabulary" || name == "NIV") return Label::kNotInVocabulary;
  return std::nullopt;
}

void Thresholds::validate() const {
  if (!(0.0 <= discard && discard < viable && viable <= 1.0))
    throw ContractViolation("thresholds must satisfy 0 <= discard < viable <= 1");
}

Label label_for(double confidence, const Thresholds& t) {
  if (confidence > t.viable) return Label::kViable;
  if (confidence < t.discard) return Label::kDiscarded;
  return Label::kRejected;
}

TargetRef TargetRef::of(const MetonymyTarget& t) {
  return {t.sentence_ref.doc_id, t.sentence_ref.index, t.verb_lemma, t.np_head_lemma};
}

std::optional<double> score_candidate(const EmbeddingModel& model, const MetonymyTarget& target,
                                      const CandidateSentence& candidate) {
  if (candidate.np_head_lemma != target.np_head_lemma)
    throw ContractViolation("score_candidate: NP head '" + candidate.np_head_lemma +
                            "' does not match target head '" + target.np_head_lemma + "'");
  if (!model.vocab().contains(candidate.verb_lemma) || !model.vocab().contains(target.verb_lemma))
    return std::nullopt;
  const std::vector<std::string> t{target.verb_lemma, target.np_head_lemma};
  const std::vector<std::string> c{candidate.verb_lemma, candidate.np_head_lemma};
  auto tv = phrase_vector(model, t);
  auto cv = phrase_vector(model, c);
  try {
    return confidence(tv.vector, cv.vector);
  } catch (const UndefinedResult&) {
    return 0.0;
  }
}

void sort_rows(std::vector<ScoredRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ScoredRow& a, const ScoredRow& b) {
    if (a.scored() != b.scored()) return a.scored();
    if (a.scored() && *a.confidence != *b.confidence) return *a.confidence > *b.confidence;
    return a.candidate < b.candidate;
  });
}

RankingTable rank(const EmbeddingModel& model, const MetonymyTarget& target,
                  std::span<const CandidateSentence> candidates, const RankOptions& options) {
  options.thresholds.validate();
  RankingTable table;
  table.target = TargetRef::of(target);

  auto add = [&](const CandidateSentence& c, std::optional<SentenceRef> source) {
    ScoredRow row;
    row.candidate = c.expression();
    row.confidence = score_candidate(model, target, c);
    row.label = row.confidence ? label_for(*row.confidence, options.thresholds)
                               : Label::kNotInVocabulary;
    row.source = std::move(source);
    table.rows.push_back(std::move(row));
  };

  std::set<std::string> seen;
  if (options.inject_target_verb) {
    CandidateSentence self;
    self.verb_lemma = target.verb_lemma;
    self.np_head_lemma = target.np_head_lemma;
    seen.insert(self.expression());
    add(self, std::nullopt);
  }
  for (const auto& c : candidates) {
    if (options.require_validated && !c.validated) continue;
    if (!seen.insert(c.expression()).second) continue;
    add(c, c.sentence_ref);
  }
  sort_rows(table.rows);
  return table;
}

std::string format_confidence(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", c);
  return buf;
}

void write_table(std::ostream& out, const RankingTable& table) {
  const auto& t = table.target;
  out << "#target\t" << t.doc_id << '\t' << t.sentence_index << '\t' << t.verb << '\t' << t.np_head
      << '\n';
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (const auto& r : table.rows) {
    if (r.candidate.find_first_of("\t\n") != std::string::npos)
      throw ContractViolation("candidate text contains a tab or newline");
    out << r.candidate << '\t' << (r.confidence ? format_confidence(*r.confidence) : "NIV") << '\t'
        << label_name(r.label);
    if (r.gold) out << '\t' << (*r.gold ? '+' : '-');
    out << '\n';
  }
}

std::vector<RankingTable> read_tables(std::istream& in, const std::string& source_name) {
  std::vector<RankingTable> tables;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#target\t", 0) == 0) {
      auto f = split_tabs(line);
      if (f.size() != 5) throw FormatError(source_name, line_no, "target header needs 5 fields");
      auto idx = parse_number<std::size_t>(f[2]);
      if (!idx) throw FormatError(source_name, line_no, "bad sentence index '" + f[2] + "'");
      if (f[1].empty() || f[3].empty() || f[4].empty())
        throw FormatError(source_name, line_no, "empty target field");
      tables.push_back({{f[1], *idx, f[3], f[4]}, {}, {}});
      continue;
    }
    if (line.front() == '#') {
      if (!tables.empty() && tables.back().rows.empty()) {
        std::string c = line.substr(1);
        if (!c.empty() && c.front() == ' ') c.erase(0, 1);
        tables.back().comments.push_back(std::move(c));
      }
      continue;
    }
    if (tables.empty()) throw FormatError(source_name, line_no, "row before any #target header");
    auto f = split_tabs(line);
    if (f.size() != 3 && f.size() != 4)
      throw FormatError(source_name, line_no, "row needs 3 or 4 fields, got " + std::to_string(f.size()));
    if (f[0].empty()) throw FormatError(source_name, line_no, "empty candidate");
    ScoredRow row;
    row.candidate = f[0];
    auto label = parse_label(f[2]);
    if (!label) throw FormatError(source_name, line_no, "unknown label '" + f[2] + "'");
    row.label = *label;
    if (f[1] == "NIV") {
      if (row.label != Label::kNotInVocabulary)
        throw FormatError(source_name, line_no, "NIV confidence with label " + f[2]);
    } else {
      auto c = parse_number<double>(f[1]);
      if (!c || *c < 0.0 || *c > 1.0) throw FormatError(source_name, line_no, "bad confidence '" + f[1] + "'");
      if (row.label == Label::kNotInVocabulary)
        throw FormatError(source_name, line_no, "NotInVocabulary label with a confidence");
      row.confidence = *c;
    }
    if (f.size() == 4) {
      if (f[3] == "+")
        row.gold = true;
      else if (f[3] == "-")
        row.gold = false;
      else
        throw FormatError(source_name, line_no, "gold label must be + or -");
    }
    tables.back().rows.push_back(std::move(row));
  }
  return tables;
}

std::vector<RankingTable> load_tables(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ranking tables '" + path.string() + "'");
  return read_tables(in, path.string());
}

}  // namespace covert
