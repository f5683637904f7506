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

// Ranking tables: candidates scored against their target by the cosine of
// joint phrase vectors, labelled by two thresholds.
//
// Table text format (one or more tables per stream):
//
//   #target<TAB>doc_id<TAB>sentence_index<TAB>verb<TAB>np_head
//   candidate<TAB>confidence|NIV<TAB>label[<TAB>+|-]
//
// Other lines starting with '#' are comments and blank lines are ignored.
// Confidences are written with five decimals.

#ifndef COVERT_RANKING_HPP_
#define COVERT_RANKING_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/embeddings.hpp"
#include "covert/metonymy.hpp"

namespace covert {

enum class Label { kViable, kRejected, kDiscarded, kNotInVocabulary };

std::string_view label_name(Label label);
/// Accepts the names above plus "NIV".
std::optional<Label> parse_label(std::string_view name);

struct Thresholds {
  double discard = 0.2;  // below: Discarded
  double viable = 0.5;   // above: Viable; the closed band between is Rejected

  /// Requires 0 <= discard < viable <= 1; throws ContractViolation.
  void validate() const;
};

Label label_for(double confidence, const Thresholds& thresholds = {});

struct ScoredRow {
  std::string candidate;
  std::optional<double> confidence;  // empty for NotInVocabulary
  Label label = Label::kNotInVocabulary;
  std::optional<bool> gold;          // true = acceptable paraphrase
  std::optional<SentenceRef> source; // candidate sentence, when harvested

  bool scored() const noexcept { return confidence.has_value(); }
};

struct TargetRef {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string verb;
  std::string np_head;

  static TargetRef of(const MetonymyTarget& t);
  bool operator==(const TargetRef&) const = default;
};

struct RankingTable {
  TargetRef target;
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<ScoredRow> rows;
};

/// Joint-vector confidence of `candidate` against `target`: mean of
/// [target verb, head] versus mean of [candidate verb, head]. A multiword
/// candidate is scored on its verb lemma. Empty when the candidate verb or
/// the target verb is out of vocabulary. Throws ContractViolation when the
/// NP heads differ.
std::optional<double> score_candidate(const EmbeddingModel& model, const MetonymyTarget& target,
                                      const CandidateSentence& candidate);

struct RankOptions {
  Thresholds thresholds;
  /// Adds the target verb itself as a candidate; it always scores 1.
  bool inject_target_verb = false;
  /// Skip candidates whose `validated` flag is false.
  bool require_validated = true;
};

/// Scores, labels and sorts. Candidates sharing an expression collapse to
/// the first occurrence.
RankingTable rank(const EmbeddingModel& model, const MetonymyTarget& target,
                  std::span<const CandidateSentence> candidates, const RankOptions& options = {});

/// Confidence descending, ties by candidate ascending, NotInVocabulary last.
void sort_rows(std::vector<ScoredRow>& rows);

void write_table(std::ostream& out, const RankingTable& table);
std::vector<RankingTable> read_tables(std::istream& in, const std::string& source_name);
std::vector<RankingTable> load_tables(const std::filesystem::path& path);

/// "0.42942"; five decimals.
std::string format_confidence(double c);

}  // namespace covert

#endif  // COVERT_RANKING_HPP_
