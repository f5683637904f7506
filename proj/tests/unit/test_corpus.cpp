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

#include <map>
#include <random>
#include <sstream>

#include "covert/corpus.hpp"
#include "covert/error.hpp"
#include "test_support.hpp"

using namespace covert;
using covert::testing::plain_corpus;

namespace {

const char* kProverb = "what is good for the goose is good for the gander\n";
const std::vector<std::string> kColumns = {"for", "gander", "good", "goose", "is", "the", "what"};

Corpus vertical(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in, CorpusFormat::kVertical, "test.vert");
}

}  // namespace

TEST_CASE("vertical reader yields sentences in order") {
  auto c = vertical(
      "#doc a\n"
      "The\tthe\tDET\ncats\tcat\tNOUN\nsleep\tsleep\tVERB\n\n"
      "Dogs\tdog\tNOUN\nbark\tbark\tVERB\nloudly\tloudly\tADV\n");
  REQUIRE(c.sentences.size() == 2);
  CHECK(c.sentences[0].tokens.size() == 3);
  CHECK(c.sentences[1].tokens.size() == 3);
  CHECK(c.sentences[0].tokens[1].lemma == "cat");
  CHECK(c.sentences[0].tokens[1].pos == Pos::kNoun);
  CHECK(c.sentences[1].doc_id == "a");
  CHECK(c.sentences[1].index == 1);
  CHECK(c.token_count() == 6);
}

TEST_CASE("document directives reset the sentence index") {
  auto c = vertical("x\tx\tNOUN\n\n#doc b\ny\ty\tNOUN\n#doc c\nz\tz\tNOUN\n");
  REQUIRE(c.sentences.size() == 3);
  CHECK(c.sentences[0].doc_id == "test");
  CHECK(c.sentences[1].ref() == SentenceRef{"b", 0});
  CHECK(c.sentences[2].ref() == SentenceRef{"c", 0});
  CHECK(c.find({"c", 0}) == &c.sentences[2]);
  CHECK(c.find({"c", 1}) == nullptr);
}

TEST_CASE("malformed vertical record names its line") {
  try {
    vertical("a\ta\tNOUN\nb\tb\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(vertical("a\ta\tNOPE\n"), FormatError);
}

TEST_CASE("plain reader lowercases and tags punctuation") {
  auto c = plain_corpus("What is good for the goose\n");
  REQUIRE(c.sentences.size() == 1);
  const auto& t = c.sentences[0].tokens;
  REQUIRE(t.size() == 6);
  CHECK(t[0].surface == "What");
  CHECK(t[0].lemma == "what");
  CHECK(t[0].pos == Pos::kOther);
  auto p = tokenize_plain("Hello , world ! ’");
  REQUIRE(p.size() == 5);
  CHECK(p[1].pos == Pos::kPunct);
  CHECK(p[3].pos == Pos::kPunct);
  CHECK(p[4].pos == Pos::kPunct);
}

TEST_CASE("empty input yields no sentences") {
  CHECK(plain_corpus("").sentences.empty());
  CHECK(vertical("").sentences.empty());
  CHECK(vertical("\n\n").sentences.empty());
}

TEST_CASE("unreadable path is an IoError") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.vert", CorpusFormat::kVertical), IoError);
}

TEST_CASE("proverb vocabulary has the seven table columns") {
  auto v = build_vocabulary(plain_corpus(kProverb), 100, 1);
  CHECK(v.size() == 7);
  CHECK(v.alphabetical() == kColumns);
  CHECK(v.total_tokens() == 11);
}

TEST_CASE("frequency cap breaks ties lexicographically") {
  auto v = build_vocabulary(plain_corpus(kProverb), 2, 1);
  REQUIRE(v.size() == 2);
  CHECK(v.word(0) == "for");
  CHECK(v.word(1) == "good");
  CHECK(v.count(0) == 2);
}

TEST_CASE("min_count excludes rare lemmas") {
  auto v = build_vocabulary(plain_corpus(kProverb), 100, 2);
  CHECK(v.alphabetical() == std::vector<std::string>{"for", "good", "is", "the"});
  CHECK_THROWS_AS(build_vocabulary(plain_corpus(kProverb), 0, 1), ContractViolation);
  CHECK_THROWS_AS(build_vocabulary(plain_corpus(kProverb), 5, 0), ContractViolation);
}

TEST_CASE("empty corpus gives an empty vocabulary") {
  CHECK(build_vocabulary(plain_corpus(""), 10, 1).empty());
}

TEST_CASE("next-word rows for good and goose") {
  auto c = plain_corpus(kProverb);
  auto v = build_vocabulary(c, 100, 1);
  auto n = next_word_counts(c, v);
  CHECK(n.dense_row("good", kColumns) == std::vector<std::uint64_t>{2, 0, 0, 0, 0, 0, 0});
  CHECK(n.dense_row("goose", kColumns) == std::vector<std::uint64_t>{0, 0, 0, 0, 1, 0, 0});
  CHECK(n.dense_row("gander", kColumns) == std::vector<std::uint64_t>(7, 0));
}

TEST_CASE("single-token sentences contribute no pairs") {
  auto c = plain_corpus("alone\nalone\n");
  auto n = next_word_counts(c, build_vocabulary(c, 10, 1));
  CHECK(n.rows().empty());
}

TEST_CASE("next-word counts never cross sentences") {
  auto c = plain_corpus("a b\nc d\n");
  auto n = next_word_counts(c, build_vocabulary(c, 10, 1));
  CHECK(n.row("b") == nullptr);
  REQUIRE(n.row("a") != nullptr);
  CHECK(n.row("a")->at("b") == 1);
}

TEST_CASE("random corpora: vocabulary and next-word invariants") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> word(0, 14), len(1, 9), lines(0, 60);
    std::string text;
    int n_lines = lines(rng);
    for (int l = 0; l < n_lines; ++l) {
      int n = len(rng);
      for (int i = 0; i < n; ++i) text += "t" + std::to_string(word(rng)) + (i + 1 < n ? " " : "");
      text += "\n";
    }
    auto c = plain_corpus(text);
    std::size_t cap = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    std::uint64_t min_count = std::uniform_int_distribution<std::uint64_t>(1, 3)(rng);
    auto v = build_vocabulary(c, cap, min_count);
    auto again = build_vocabulary(c, cap, min_count, ExecutionMode::kParallel);
    REQUIRE(v.entries().size() == again.entries().size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v.word(static_cast<WordId>(i)) == again.word(static_cast<WordId>(i)));

    std::map<std::string, std::uint64_t> counts;
    for (const auto& s : c.sentences)
      for (const auto& t : s.tokens) ++counts[t.lemma];
    CHECK(v.size() <= cap);
    for (const auto& e : v.entries()) {
      CHECK(e.count == counts[e.word]);
      CHECK(e.count >= min_count);
    }
    for (const auto& [word_u, count_u] : counts) {
      if (v.contains(word_u) || count_u < min_count) continue;
      for (const auto& e : v.entries())
        CHECK((e.count > count_u || (e.count == count_u && e.word < word_u)));
    }

    // Row sums equal in-vocabulary successor occurrences, by brute force.
    auto nw = next_word_counts(c, v);
    std::map<std::string, std::uint64_t> expected;
    for (const auto& s : c.sentences)
      for (std::size_t i = 0; i + 1 < s.tokens.size(); ++i)
        if (v.contains(s.tokens[i].lemma) && v.contains(s.tokens[i + 1].lemma)) ++expected[s.tokens[i].lemma];
    for (const auto& e : v.entries()) {
      std::uint64_t sum = 0;
      if (auto* row = nw.row(e.word))
        for (const auto& [u, k] : *row) {
          CHECK(k >= 1);
          sum += k;
        }
      CHECK(sum == expected[e.word]);
    }
  }
}
