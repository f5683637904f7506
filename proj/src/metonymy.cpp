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

#include "covert/metonymy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include "covert/error.hpp"

namespace covert {

namespace {

constexpr std::array<std::string_view, 8> kParticles = {"up",   "out",  "off",  "on",
                                                        "in",   "down", "back", "over"};
constexpr std::array<std::string_view, 7> kPossessives = {"my",  "your", "his",  "her",
                                                          "its", "our",  "their"};
constexpr std::array<std::string_view, 9> kQuoteClosers = {"'", "\"", "?", "!", "’",
                                                           "”", "»", "''", "?'"};

bool is_possessive_token(const Token& t) { return t.pos == Pos::kPron && is_possessive(t.lemma); }

bool is_particle_token(const Token& t) {
  return (t.pos == Pos::kPrep || t.pos == Pos::kAdv) && is_particle(t.lemma);
}

// May precede the nouns inside an NP.
bool is_premodifier(const Token& t) {
  return t.pos == Pos::kDet || t.pos == Pos::kAdj || t.pos == Pos::kNum || is_possessive_token(t);
}

bool is_gap_token(const Token& t) {
  switch (t.pos) {
    case Pos::kDet:
    case Pos::kAdj:
    case Pos::kAdv:
    case Pos::kNum:
      return true;
    case Pos::kPron:
      return is_possessive(t.lemma);
    case Pos::kPrep:
      return is_particle(t.lemma);
    default:
      return false;
  }
}

bool blocks_after_verb(const Token& t) { return t.pos == Pos::kPrep && !is_particle(t.lemma); }

std::size_t np_start(const std::vector<Token>& tokens, std::size_t verb_position,
                     std::size_t first_noun) {
  std::size_t b = first_noun;
  while (b > verb_position + 1 &&
         (is_premodifier(tokens[b - 1]) || tokens[b - 1].pos == Pos::kAdv) &&
         !is_particle_token(tokens[b - 1]))
    --b;
  while (b < first_noun && tokens[b].pos == Pos::kAdv) ++b;
  return b;
}

std::optional<std::string> particle_in(const std::vector<Token>& tokens, std::size_t from,
                                       std::size_t to) {
  for (std::size_t i = from; i < to; ++i)
    if (is_particle_token(tokens[i])) return tokens[i].lemma;
  return std::nullopt;
}

}  // namespace

std::string_view verb_category_name(VerbCategory c) {
  return c == VerbCategory::kAspectual ? "aspectual" : "psychological";
}

std::optional<VerbCategory> parse_verb_category(std::string_view name) {
  if (name == "aspectual") return VerbCategory::kAspectual;
  if (name == "psychological") return VerbCategory::kPsychological;
  return std::nullopt;
}

std::vector<VerbSpec> default_verbs() {
  return {{"begin", 0.91, VerbCategory::kAspectual},
          {"finish", 0.66, VerbCategory::kAspectual},
          {"enjoy", 0.57, VerbCategory::kPsychological}};
}

bool is_particle(std::string_view lemma) {
  return std::find(kParticles.begin(), kParticles.end(), lemma) != kParticles.end();
}

bool is_possessive(std::string_view lemma) {
  return std::find(kPossessives.begin(), kPossessives.end(), lemma) != kPossessives.end();
}

bool is_quotative_inversion(const Sentence& sentence, std::size_t verb_position) {
  if (verb_position == 0 || verb_position > sentence.tokens.size()) return false;
  const Token& prev = sentence.tokens[verb_position - 1];
  if (prev.pos != Pos::kPunct) return false;
  return std::find(kQuoteClosers.begin(), kQuoteClosers.end(), prev.surface) != kQuoteClosers.end();
}

std::optional<NpMatch> scan_object_np(const Sentence& sentence, std::size_t verb_position,
                                      std::size_t max_gap) {
  const auto& tokens = sentence.tokens;
  const std::size_t n = tokens.size();
  if (verb_position + 1 >= n) return std::nullopt;
  if (blocks_after_verb(tokens[verb_position + 1])) return std::nullopt;

  std::size_t i = verb_position + 1;
  for (; i < n && tokens[i].pos != Pos::kNoun; ++i) {
    if (tokens[i].pos == Pos::kPunct || tokens[i].pos == Pos::kVerb) return std::nullopt;
    if (i - verb_position > max_gap) return std::nullopt;
  }
  if (i == n) return std::nullopt;

  NpMatch m;
  m.begin = np_start(tokens, verb_position, i);
  m.end = i;
  while (m.end < n && tokens[m.end].pos == Pos::kNoun) ++m.end;
  m.head = m.end - 1;
  m.particle = particle_in(tokens, verb_position + 1, i);
  return m;
}

bool validate_direct_object(const Sentence& sentence, std::size_t verb_position,
                            std::size_t np_begin, std::size_t np_end, std::size_t max_gap) {
  const auto& tokens = sentence.tokens;
  if (verb_position >= tokens.size() || np_begin <= verb_position || np_end > tokens.size() ||
      np_begin >= np_end)
    return false;
  if (tokens[np_end - 1].pos != Pos::kNoun) return false;
  if (blocks_after_verb(tokens[verb_position + 1])) return false;

  std::size_t first_noun = np_begin;
  while (tokens[first_noun].pos != Pos::kNoun) ++first_noun;
  if (first_noun - verb_position - 1 > max_gap) return false;
  for (std::size_t i = verb_position + 1; i < first_noun; ++i)
    if (!is_gap_token(tokens[i])) return false;
  return true;
}

std::string CandidateSentence::expression() const {
  return particle.empty() ? verb_lemma : verb_lemma + " " + particle;
}

std::vector<MetonymyTarget> find_targets(const Corpus& corpus, std::span<const VerbSpec> verbs,
                                         std::size_t max_gap) {
  std::vector<MetonymyTarget> out;
  auto is_target = [&](const std::string& lemma) {
    return std::any_of(verbs.begin(), verbs.end(), [&](const VerbSpec& v) { return v.lemma == lemma; });
  };
  for (const auto& s : corpus.sentences) {
    for (std::size_t v = 0; v < s.tokens.size(); ++v) {
      const Token& t = s.tokens[v];
      if (t.pos != Pos::kVerb || !is_target(t.lemma) || is_quotative_inversion(s, v)) continue;
      auto m = scan_object_np(s, v, max_gap);
      if (!m || !validate_direct_object(s, v, m->begin, m->end, max_gap)) continue;
      out.push_back({t.lemma, v, s.tokens[m->head].lemma, m->begin, m->end, s.ref()});
    }
  }
  return out;
}

std::vector<CandidateSentence> harvest_candidates(const Corpus& corpus, std::string_view np_head,
                                                  const std::set<std::string>& excluded_verbs,
                                                  std::size_t max_gap) {
  if (np_head.empty()) throw ContractViolation("harvest_candidates: empty NP head");
  std::vector<CandidateSentence> out;
  for (const auto& s : corpus.sentences) {
    for (std::size_t v = 0; v < s.tokens.size(); ++v) {
      const Token& t = s.tokens[v];
      if (t.pos != Pos::kVerb || excluded_verbs.contains(t.lemma) || is_quotative_inversion(s, v))
        continue;
      auto m = scan_object_np(s, v, max_gap);
      if (!m || s.tokens[m->head].lemma != np_head) continue;
      CandidateSentence c;
      c.verb_lemma = t.lemma;
      c.particle = m->particle.value_or("");
      c.verb_position = v;
      c.np_head_lemma = std::string(np_head);
      c.np_begin = m->begin;
      c.np_end = m->end;
      c.sentence_ref = s.ref();
      out.push_back(std::move(c));
    }
  }
  return out;
}

void validate_candidates(const Corpus& corpus, std::span<CandidateSentence> candidates,
                         std::size_t max_gap) {
  for (auto& c : candidates) {
    const Sentence* s = corpus.find(c.sentence_ref);
    if (!s)
      throw ContractViolation("candidate sentence " + c.sentence_ref.doc_id + "/" +
                              std::to_string(c.sentence_ref.index) + " not in corpus");
    c.validated = validate_direct_object(*s, c.verb_position, c.np_begin, c.np_end, max_gap);
  }
}

std::vector<MetonymyTarget> read_gold_targets(std::istream& in, const std::string& source_name,
                                              const Corpus& corpus) {
  std::vector<MetonymyTarget> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (f.size() != 4)
      throw FormatError(source_name, line_no, "expected 4 tab-separated fields, got " + std::to_string(f.size()));
    std::size_t index = 0;
    auto res = std::from_chars(f[1].data(), f[1].data() + f[1].size(), index);
    if (res.ec != std::errc() || res.ptr != f[1].data() + f[1].size())
      throw FormatError(source_name, line_no, "bad sentence index '" + f[1] + "'");
    const std::string verb = to_lower(f[2]);
    const std::string head = to_lower(f[3]);
    if (f[0].empty() || verb.empty() || head.empty())
      throw FormatError(source_name, line_no, "empty field");

    const Sentence* s = corpus.find({f[0], index});
    if (!s) throw FormatError(source_name, line_no, "sentence " + f[0] + "/" + f[1] + " not in corpus");

    std::optional<MetonymyTarget> found;
    for (std::size_t v = 0; v < s->tokens.size() && !found; ++v) {
      if (s->tokens[v].lemma != verb) continue;
      for (std::size_t h = v + 1; h < s->tokens.size(); ++h) {
        if (s->tokens[h].pos != Pos::kNoun || s->tokens[h].lemma != head) continue;
        std::size_t first = h;
        while (first > v + 1 && s->tokens[first - 1].pos == Pos::kNoun) --first;
        found = MetonymyTarget{verb, v, head, np_start(s->tokens, v, first), h + 1, s->ref()};
        break;
      }
    }
    if (!found)
      throw FormatError(source_name, line_no, "no '" + verb + "' ... '" + head + "' pair in sentence");
    out.push_back(std::move(*found));
  }
  return out;
}

std::vector<MetonymyTarget> load_gold_targets(const std::filesystem::path& path,
                                              const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gold targets '" + path.string() + "'");
  return read_gold_targets(in, path.string(), corpus);
}

}  // namespace covert
