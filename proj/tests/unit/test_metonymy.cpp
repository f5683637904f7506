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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>
#include <tuple>

#include "covert/error.hpp"
#include "covert/metonymy.hpp"
#include "test_support.hpp"

using namespace covert;
using covert::testing::tagged;
using covert::testing::tagged_corpus;

namespace {

const std::set<std::string> kTargetVerbs{"begin", "enjoy", "finish"};

std::vector<MetonymyTarget> targets_of(const std::vector<std::string>& sentences) {
  auto verbs = default_verbs();
  return find_targets(tagged_corpus(sentences), verbs);
}

}  // namespace

TEST_CASE("default verb specs") {
  auto v = default_verbs();
  REQUIRE(v.size() == 3);
  CHECK(v[0].lemma == "begin");
  CHECK(v[0].eventhood == 0.91);
  CHECK(v[1].lemma == "finish");
  CHECK(v[1].eventhood == 0.66);
  CHECK(v[2].lemma == "enjoy");
  CHECK(v[2].eventhood == 0.57);
  CHECK(v[2].category == VerbCategory::kPsychological);
}

TEST_CASE("target with a determiner and adjective") {
  auto t = targets_of({"I/PRON think/VERB you/PRON should/VERB begin/VERB the/DET next/ADJ chapter/NOUN now/ADV"});
  REQUIRE(t.size() == 1);
  CHECK(t[0].verb_lemma == "begin");
  CHECK(t[0].verb_position == 4);
  CHECK(t[0].np_head_lemma == "chapter");
  CHECK(t[0].np_begin == 5);
  CHECK(t[0].np_end == 8);
}

TEST_CASE("target before a tag question") {
  auto t = targets_of({"He/PRON seems/seem/VERB to/PREP enjoy/VERB the/DET job/NOUN ,/PUNCT does/do/VERB n't/ADV he/PRON ?/PUNCT"});
  REQUIRE(t.size() == 1);
  CHECK(t[0].verb_lemma == "enjoy");
  CHECK(t[0].np_head_lemma == "job");
}

TEST_CASE("quotative inversion is not a target") {
  CHECK(targets_of({"‘/PUNCT How/ADV about/PREP you/PRON ?/PUNCT ’/PUNCT began/begin/VERB the/DET top/ADJ man/NOUN"}).empty());
  CHECK(targets_of({"\"/PUNCT Stop/VERB !/PUNCT \"/PUNCT began/begin/VERB the/DET man/NOUN"}).empty());
  CHECK(targets_of({"Why/ADV ?/PUNCT began/begin/VERB the/DET man/NOUN"}).empty());
}

TEST_CASE("NP head is the last noun before a preposition") {
  auto t = targets_of({"Finish/finish/VERB the/DET last/ADJ packet/NOUN of/PREP cigarettes/cigarette/NOUN"});
  REQUIRE(t.size() == 1);
  CHECK(t[0].np_head_lemma == "packet");
  auto c = targets_of({"We/PRON enjoy/VERB the/DET concert/NOUN hall/NOUN"});
  REQUIRE(c.size() == 1);
  CHECK(c[0].np_head_lemma == "hall");
}

TEST_CASE("gap and blocking rules") {
  CHECK(targets_of({"begin/VERB ,/PUNCT the/DET man/NOUN"}).empty());
  CHECK(targets_of({"begin/VERB with/PREP the/DET chapter/NOUN"}).empty());
  CHECK(targets_of({"begin/VERB to/PREP read/VERB the/DET chapter/NOUN"}).empty());
  CHECK(targets_of({"begin/VERB the/DET very/ADV long/ADJ old/ADJ chapter/NOUN"}).empty());
  CHECK(targets_of({"begin/VERB the/DET very/ADV long/ADJ chapter/NOUN"}).size() == 1);
  CHECK(targets_of({"enjoy/VERB their/PRON dinner/NOUN"}).size() == 1);
  CHECK(targets_of({"enjoy/VERB it/PRON"}).empty());
}

TEST_CASE("validate_direct_object contract") {
  auto finish = tagged("finish/VERB the/DET last/ADJ packet/NOUN");
  CHECK(validate_direct_object(finish, 0, 1, 4));
  auto comma = tagged("began/begin/VERB ,/PUNCT the/DET man/NOUN");
  CHECK_FALSE(validate_direct_object(comma, 0, 2, 4));
  auto take = tagged("Take/take/VERB in/PREP the/DET scene/NOUN");
  CHECK(validate_direct_object(take, 0, 2, 4));
  auto m = scan_object_np(take, 0);
  REQUIRE(m);
  CHECK(m->particle == std::optional<std::string>("in"));
  auto about = tagged("read/VERB about/PREP the/DET chapter/NOUN");
  CHECK_FALSE(validate_direct_object(about, 0, 2, 4));
  auto conj = tagged("read/VERB and/CONJ the/DET chapter/NOUN");
  CHECK_FALSE(validate_direct_object(conj, 0, 2, 4));
  auto pron = tagged("gave/give/VERB him/PRON the/DET book/NOUN");
  CHECK_FALSE(validate_direct_object(pron, 0, 2, 4));
  // Out-of-range spans are simply false.
  CHECK_FALSE(validate_direct_object(finish, 0, 0, 4));
  CHECK_FALSE(validate_direct_object(finish, 0, 1, 9));
  CHECK_FALSE(validate_direct_object(finish, 7, 8, 9));
}

TEST_CASE("candidate harvest") {
  auto c = tagged_corpus({
      "She/PRON read/VERB the/DET chapter/NOUN aloud/ADV",
      "the/DET chapter/NOUN was/be/VERB long/ADJ",
      "begin/VERB the/DET chapter/NOUN",
      "He/PRON gave/give/VERB him/PRON the/DET chapter/NOUN",
      "They/PRON read/VERB the/DET book/NOUN",
  });
  auto cands = harvest_candidates(c, "chapter", kTargetVerbs);
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].verb_lemma == "read");
  CHECK(cands[0].sentence_ref == SentenceRef{"d", 0});
  CHECK_FALSE(cands[0].validated);
  CHECK(cands[1].verb_lemma == "give");
  validate_candidates(c, cands);
  CHECK(cands[0].validated);
  CHECK_FALSE(cands[1].validated);
  CHECK(cands[0].expression() == "read");
  CHECK_THROWS_AS(harvest_candidates(c, "", kTargetVerbs), ContractViolation);
}

TEST_CASE("particle verbs keep their particle") {
  auto c = tagged_corpus({"Take/take/VERB in/PREP the/DET scene/NOUN"});
  auto cands = harvest_candidates(c, "scene", kTargetVerbs);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].expression() == "take in");
}

TEST_CASE("gold target files") {
  auto c = tagged_corpus({"I/PRON will/VERB begin/VERB the/DET next/ADJ chapter/NOUN",
                          "We/PRON finish/VERB ,/PUNCT the/DET work/NOUN"},
                         "doc");
  std::istringstream good("# comment\n\ndoc\t0\tbegin\tchapter\ndoc\t1\tfinish\twork\n");
  auto t = read_gold_targets(good, "gold", c);
  REQUIRE(t.size() == 2);
  CHECK(t[0].verb_position == 2);
  CHECK(t[0].np_begin == 3);
  CHECK(t[0].np_end == 6);
  CHECK(t[1].np_head_lemma == "work");

  std::istringstream empty("");
  CHECK(read_gold_targets(empty, "gold", c).empty());

  auto line_of = [&](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_gold_targets(in, "gold", c);
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("doc\t0\tbegin\tchapter\ndoc\t0\tbegin\n") == 2);
  CHECK(line_of("doc\tx\tbegin\tchapter\n") == 1);
  CHECK(line_of("doc\t0\tbegin\tchapter\nnope\t4\tbegin\tchapter\n") == 2);
  CHECK(line_of("doc\t0\tenjoy\tchapter\n") == 1);
}

TEST_CASE("extraction equals brute-force enumeration") {
  const std::vector<std::string> sentences = {
      "I/PRON began/begin/VERB the/DET book/NOUN",
      "She/PRON read/VERB the/DET old/ADJ book/NOUN quickly/ADV",
      "They/PRON finished/finish/VERB their/PRON long/ADJ dinner/NOUN",
      "We/PRON ate/eat/VERB dinner/NOUN and/CONJ left/leave/VERB the/DET room/NOUN",
      "He/PRON enjoyed/enjoy/VERB ,/PUNCT oddly/ADV ,/PUNCT the/DET film/NOUN",
      "He/PRON enjoyed/enjoy/VERB the/DET film/NOUN festival/NOUN",
      "The/DET film/NOUN ended/end/VERB",
      "Pick/pick/VERB up/PREP the/DET three/NUM red/ADJ books/book/NOUN",
      "Look/look/VERB at/PREP the/DET film/NOUN",
      "gave/give/VERB him/PRON the/DET book/NOUN",
      "Write/write/VERB a/DET very/ADV short/ADJ letter/NOUN",
      "Write/write/VERB a/DET very/ADV very/ADV short/ADJ letter/NOUN",
      "She/PRON began/begin/VERB and/CONJ finished/finish/VERB the/DET race/NOUN",
      "‘/PUNCT No/DET ’/PUNCT began/begin/VERB the/DET man/NOUN",
      "Read/read/VERB then/ADV the/DET letter/NOUN",
      "Read/read/VERB out/PREP his/PRON letter/NOUN of/PREP thanks/thanks/NOUN",
      "Sing/sing/VERB two/NUM psalms/psalm/NOUN",
      "Cook/cook/VERB",
      "They/PRON will/VERB enjoy/VERB it/PRON",
      "Finish/finish/VERB your/PRON soup/NOUN ,/PUNCT eat/VERB the/DET bread/NOUN",
  };
  auto c = tagged_corpus(sentences);
  REQUIRE(c.sentences.size() == 20);

  // Oracle: a verb governs the first noun run after it when every token up
  // to that run's first noun is a permitted gap token, there are at most
  // three of them, and no non-particle preposition follows the verb.
  using Key = std::tuple<std::size_t, std::size_t, std::string>;
  std::set<Key> expected;
  std::set<std::string> heads;
  for (std::size_t si = 0; si < c.sentences.size(); ++si) {
    const auto& tk = c.sentences[si].tokens;
    for (std::size_t v = 0; v < tk.size(); ++v) {
      if (tk[v].pos != Pos::kVerb) continue;
      if (v > 0 && tk[v - 1].pos == Pos::kPunct) {
        const auto& s = tk[v - 1].surface;
        if (s == "’" || s == "'" || s == "\"" || s == "?" || s == "!") continue;
      }
      std::size_t first = v + 1;
      while (first < tk.size() && tk[first].pos != Pos::kNoun) ++first;
      if (first >= tk.size()) continue;
      bool ok = first - v - 1 <= 3;
      if (v + 1 < tk.size() && tk[v + 1].pos == Pos::kPrep && !is_particle(tk[v + 1].lemma)) ok = false;
      for (std::size_t g = v + 1; g < first && ok; ++g) {
        const auto& t = tk[g];
        ok = t.pos == Pos::kDet || t.pos == Pos::kAdj || t.pos == Pos::kAdv || t.pos == Pos::kNum ||
             (t.pos == Pos::kPron && is_possessive(t.lemma)) ||
             (t.pos == Pos::kPrep && is_particle(t.lemma));
      }
      if (!ok) continue;
      std::size_t last = first;
      while (last + 1 < tk.size() && tk[last + 1].pos == Pos::kNoun) ++last;
      expected.insert({si, v, tk[last].lemma});
    }
    for (const auto& t : tk)
      if (t.pos == Pos::kNoun) heads.insert(t.lemma);
  }

  std::set<Key> got;
  auto verbs = default_verbs();
  for (const auto& t : find_targets(c, verbs)) got.insert({t.sentence_ref.index, t.verb_position, t.np_head_lemma});
  for (const auto& h : heads) {
    auto cands = harvest_candidates(c, h, kTargetVerbs);
    validate_candidates(c, cands);
    for (const auto& cand : cands) {
      CHECK_FALSE(kTargetVerbs.contains(cand.verb_lemma));
      if (cand.validated) got.insert({cand.sentence_ref.index, cand.verb_position, cand.np_head_lemma});
    }
  }
  CHECK(got == expected);
  CHECK(expected.size() >= 12);

  // Every target validates on its own span; repeated runs are identical.
  for (const auto& t : find_targets(c, verbs)) {
    CHECK(validate_direct_object(*c.find(t.sentence_ref), t.verb_position, t.np_begin, t.np_end));
  }
  CHECK(find_targets(c, verbs) == find_targets(c, verbs));
}
