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

// Verbal-metonymy extraction: target sentences where an event-selecting
// verb takes an entity NP ("begin the chapter"), candidate sentences where
// another verb takes an NP with the same head ("read the chapter"), and a
// rule-based direct-object check standing in for a dependency parser.
//
// The object scan from a verb at position v:
//   - a preposition right after v that is not a particle blocks the match;
//   - at most `max_gap` tokens may sit between v and the first noun, and
//     none of them may be PUNCT or VERB;
//   - the NP is the maximal (DET|ADJ|NUM|possessive PRON)* NOUN+ run around
//     that first noun, and its head is the last noun of the run.
// validate_direct_object additionally requires every gap token to be a DET,
// ADJ, ADV, NUM, possessive PRON or particle, so "read about the chapter"
// is harvested but fails validation.

#ifndef COVERT_METONYMY_HPP_
#define COVERT_METONYMY_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/corpus.hpp"

namespace covert {

enum class VerbCategory { kAspectual, kPsychological };

std::string_view verb_category_name(VerbCategory c);
std::optional<VerbCategory> parse_verb_category(std::string_view name);

struct VerbSpec {
  std::string lemma;
  double eventhood = 0.0;
  VerbCategory category = VerbCategory::kAspectual;
};

/// begin (0.91, aspectual), finish (0.66, aspectual), enjoy (0.57, psychological).
std::vector<VerbSpec> default_verbs();

inline constexpr std::size_t kDefaultMaxGap = 3;

bool is_particle(std::string_view lemma);
bool is_possessive(std::string_view lemma);

/// Verbs right after a closing quote, '?' or '!' introduce reported speech
/// ("'How about you?' began the top man") and never govern the NP after them.
bool is_quotative_inversion(const Sentence& sentence, std::size_t verb_position);

struct NpMatch {
  std::size_t begin = 0;  // [begin, end) token range of the NP
  std::size_t end = 0;
  std::size_t head = 0;   // index of the last noun
  std::optional<std::string> particle;
};

/// Proximity scan for the NP governed by the verb at `verb_position`.
std::optional<NpMatch> scan_object_np(const Sentence& sentence, std::size_t verb_position,
                                      std::size_t max_gap = kDefaultMaxGap);

/// The direct-object contract described above, applied to an explicit span.
bool validate_direct_object(const Sentence& sentence, std::size_t verb_position,
                            std::size_t np_begin, std::size_t np_end,
                            std::size_t max_gap = kDefaultMaxGap);

struct MetonymyTarget {
  std::string verb_lemma;
  std::size_t verb_position = 0;
  std::string np_head_lemma;
  std::size_t np_begin = 0;
  std::size_t np_end = 0;
  SentenceRef sentence_ref;

  bool operator==(const MetonymyTarget&) const = default;
};

struct CandidateSentence {
  std::string verb_lemma;
  std::string particle;  // empty unless a particle sits between verb and NP
  std::size_t verb_position = 0;
  std::string np_head_lemma;
  std::size_t np_begin = 0;
  std::size_t np_end = 0;
  SentenceRef sentence_ref;
  bool validated = false;

  /// "take in" for a particle verb, else the verb lemma.
  std::string expression() const;

  bool operator==(const CandidateSentence&) const = default;
};

/// Targets in document order, then token order. Every target passes
/// validate_direct_object.
std::vector<MetonymyTarget> find_targets(const Corpus& corpus, std::span<const VerbSpec> verbs,
                                         std::size_t max_gap = kDefaultMaxGap);

/// One unvalidated candidate per (verb, NP) occurrence whose head is
/// `np_head` and whose verb lemma is not excluded.
std::vector<CandidateSentence> harvest_candidates(const Corpus& corpus, std::string_view np_head,
                                                  const std::set<std::string>& excluded_verbs,
                                                  std::size_t max_gap = kDefaultMaxGap);

/// Sets `validated` on each candidate. Throws ContractViolation when a
/// candidate's sentence is not in the corpus.
void validate_candidates(const Corpus& corpus, std::span<CandidateSentence> candidates,
                         std::size_t max_gap = kDefaultMaxGap);

/// Gold targets: `doc_id<TAB>sentence_index<TAB>verb_lemma<TAB>np_head_lemma`
/// per line; blank lines and `#` comments are skipped. Each record is
/// anchored in `corpus`: the first token with the verb lemma followed by a
/// noun with the head lemma. Throws FormatError (with the line number) for a
/// malformed record or one that cannot be anchored.
std::vector<MetonymyTarget> read_gold_targets(std::istream& in, const std::string& source_name,
                                              const Corpus& corpus);
std::vector<MetonymyTarget> load_gold_targets(const std::filesystem::path& path,
                                              const Corpus& corpus);

}  // namespace covert

#endif  // COVERT_METONYMY_HPP_
