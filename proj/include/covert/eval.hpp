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

// Ranked paraphrases judged as a binary classifier: a row is predicted
// positive iff its label is Viable, and compared with its gold judgement.

#ifndef COVERT_EVAL_HPP_
#define COVERT_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/ranking.hpp"

namespace covert {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

/// How unscored (NotInVocabulary) rows enter the counts.
enum class NivPolicy {
  kExclude,       // left out of the matrix and of the curve
  kTrueNegative,  // tallied as true negatives, ranked after every scored row
};

std::optional<NivPolicy> parse_niv_policy(std::string_view name);
std::string_view niv_policy_name(NivPolicy p);

struct ConfusionReport {
  ConfusionMatrix matrix;
  std::size_t niv_rows = 0;
};

/// Throws ContractViolation naming the first row that lacks a gold label.
ConfusionReport confusion(std::span<const RankingTable> tables,
                          NivPolicy policy = NivPolicy::kExclude);

/// Per target verb, in verb order.
std::map<std::string, ConfusionReport> confusion_by_verb(std::span<const RankingTable> tables,
                                                         NivPolicy policy = NivPolicy::kExclude);

/// Throw UndefinedResult on a zero denominator.
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);

/// (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)); UndefinedResult
/// when any marginal is zero.
double phi_coefficient(const ConfusionMatrix& cm);

struct PRPoint {
  std::size_t rank = 0;  // 1-based
  double precision = 0.0;
  double recall = 0.0;
};

/// Rows of every table pooled and ordered by confidence descending (stable
/// in table order). Point k treats the top k rows as retrieved. Recall is
/// over all gold-positive rows in the pool.
std::vector<PRPoint> pr_curve(std::span<const RankingTable> tables,
                              NivPolicy policy = NivPolicy::kExclude);

void write_pr_csv(std::ostream& out, std::span<const PRPoint> points);

/// Ranking tables in which every row carries a gold label. Throws
/// FormatError with the line number otherwise.
std::vector<RankingTable> read_fixture(std::istream& in, const std::string& source_name);
std::vector<RankingTable> load_fixture(const std::filesystem::path& path);

/// Candidate gold labels: `doc_id<TAB>sentence_index<TAB>candidate<TAB>+|-`.
/// Blank lines and '#' comments are skipped.
struct GoldLabels {
  std::map<std::pair<SentenceRef, std::string>, bool> labels;
};

GoldLabels read_gold_labels(std::istream& in, const std::string& source_name);
GoldLabels load_gold_labels(const std::filesystem::path& path);

/// Sets the gold label of every row named in `gold`. Returns the number of
/// rows updated.
std::size_t apply_gold(std::span<RankingTable> tables, const GoldLabels& gold);

}  // namespace covert

#endif  // COVERT_EVAL_HPP_
