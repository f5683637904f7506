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

#include <cmath>
#include <random>
#include <sstream>

#include "covert/error.hpp"
#include "covert/ranking.hpp"
#include "test_support.hpp"

using namespace covert;
using covert::testing::hand_model;

namespace {

MetonymyTarget target(const std::string& verb, const std::string& head) {
  MetonymyTarget t;
  t.verb_lemma = verb;
  t.np_head_lemma = head;
  t.sentence_ref = {"doc", 3};
  return t;
}

CandidateSentence candidate(const std::string& verb, const std::string& head, std::size_t index = 0,
                            const std::string& particle = "") {
  CandidateSentence c;
  c.verb_lemma = verb;
  c.np_head_lemma = head;
  c.particle = particle;
  c.sentence_ref = {"doc", index};
  c.validated = true;
  return c;
}

// Joint vectors j_t = (begin + chapter) / 2 and j_c = (read + chapter) / 2
// are placed at cos = 0.75 (about 41.4 degrees); the verb rows follow.
EmbeddingModel angled_model() {
  const std::vector<double> head{0.2, 0.1};
  const std::vector<double> jt{1.0, 0.0};
  const std::vector<double> jc{0.75, std::sqrt(1.0 - 0.75 * 0.75)};
  auto verb = [&](const std::vector<double>& j) {
    return std::vector<double>{2 * j[0] - head[0], 2 * j[1] - head[1]};
  };
  return hand_model({{"begin", verb(jt)},
                     {"chapter", head},
                     {"read", verb(jc)},
                     {"write", {-1.0, 0.3}},
                     {"discuss", {0.2, 1.0}}});
}

}  // namespace

TEST_CASE("threshold boundaries are strict") {
  CHECK(label_for(0.5) == Label::kRejected);
  CHECK(label_for(std::nextafter(0.5, 1.0)) == Label::kViable);
  CHECK(label_for(0.2) == Label::kRejected);
  CHECK(label_for(std::nextafter(0.2, 0.0)) == Label::kDiscarded);
  CHECK(label_for(0.0) == Label::kDiscarded);
  CHECK(label_for(1.0) == Label::kViable);
  Thresholds t{0.3, 0.7};
  CHECK(label_for(0.6, t) == Label::kRejected);
  CHECK_THROWS_AS((Thresholds{0.5, 0.5}.validate()), ContractViolation);
  CHECK_THROWS_AS((Thresholds{-0.1, 0.5}.validate()), ContractViolation);
  CHECK_THROWS_AS((Thresholds{0.2, 1.1}.validate()), ContractViolation);
}

TEST_CASE("label names round trip") {
  for (auto l : {Label::kViable, Label::kRejected, Label::kDiscarded, Label::kNotInVocabulary})
    CHECK(parse_label(label_name(l)) == l);
  CHECK(parse_label("NIV") == Label::kNotInVocabulary);
  CHECK_FALSE(parse_label("viable"));
}

TEST_CASE("identical verb scores one") {
  auto m = angled_model();
  auto s = score_candidate(m, target("begin", "chapter"), candidate("begin", "chapter"));
  REQUIRE(s);
  CHECK(*s == doctest::Approx(1.0));
}

TEST_CASE("hand-built angle gives 0.75") {
  auto m = angled_model();
  auto s = score_candidate(m, target("begin", "chapter"), candidate("read", "chapter"));
  REQUIRE(s);
  CHECK(*s == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(label_for(*s) == Label::kViable);
}

TEST_CASE("unknown candidate verbs are not in vocabulary") {
  auto m = angled_model();
  CHECK_FALSE(score_candidate(m, target("begin", "chapter"), candidate("keep", "chapter")));
  CHECK_FALSE(score_candidate(m, target("start", "chapter"), candidate("read", "chapter")));
  CHECK_THROWS_AS(score_candidate(m, target("begin", "chapter"), candidate("read", "book")),
                  ContractViolation);
  // A particle verb is scored on its verb.
  auto plain = score_candidate(m, target("begin", "chapter"), candidate("read", "chapter"));
  auto particle = score_candidate(m, target("begin", "chapter"), candidate("read", "chapter", 0, "out"));
  CHECK(plain == particle);
}

TEST_CASE("rank sorts, labels and dedupes") {
  auto m = angled_model();
  std::vector<CandidateSentence> cands{candidate("write", "chapter", 1), candidate("read", "chapter", 2),
                                       candidate("keep", "chapter", 3), candidate("read", "chapter", 4),
                                       candidate("discuss", "chapter", 5)};
  auto t = rank(m, target("begin", "chapter"), cands);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].candidate == "read");
  CHECK(t.rows[0].source == SentenceRef{"doc", 2});
  CHECK(t.rows.back().candidate == "keep");
  CHECK(t.rows.back().label == Label::kNotInVocabulary);
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) CHECK(*t.rows[i - 1].confidence >= *t.rows[i].confidence);
  CHECK(t.target == TargetRef{"doc", 3, "begin", "chapter"});
}

TEST_CASE("injected target verb ranks first at one") {
  auto m = angled_model();
  std::vector<CandidateSentence> cands{candidate("read", "chapter")};
  RankOptions opt;
  opt.inject_target_verb = true;
  auto t = rank(m, target("begin", "chapter"), cands, opt);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].candidate == "begin");
  CHECK(*t.rows[0].confidence == doctest::Approx(1.0));
  CHECK_FALSE(t.rows[0].source);
}

TEST_CASE("unvalidated candidates are skipped unless asked") {
  auto m = angled_model();
  auto c = candidate("read", "chapter");
  c.validated = false;
  std::vector<CandidateSentence> cands{c};
  CHECK(rank(m, target("begin", "chapter"), cands).rows.empty());
  RankOptions opt;
  opt.require_validated = false;
  CHECK(rank(m, target("begin", "chapter"), cands, opt).rows.size() == 1);
}

TEST_CASE("empty candidate set gives an empty table") {
  auto m = angled_model();
  CHECK(rank(m, target("begin", "chapter"), {}).rows.empty());
}

TEST_CASE("published score bands") {
  for (double c : {0.68158, 0.58792, 0.55673}) CHECK(label_for(c) == Label::kViable);
  for (double c : {0.44237, 0.40580, 0.35518, 0.36162}) CHECK(label_for(c) != Label::kViable);
}

TEST_CASE("sort_rows orders ties by candidate and puts NIV last") {
  std::vector<ScoredRow> rows{{"b", 0.4, Label::kRejected, {}, {}},
                              {"z", std::nullopt, Label::kNotInVocabulary, {}, {}},
                              {"a", 0.4, Label::kRejected, {}, {}},
                              {"c", 0.9, Label::kViable, {}, {}},
                              {"y", std::nullopt, Label::kNotInVocabulary, {}, {}}};
  sort_rows(rows);
  std::vector<std::string> order;
  for (const auto& r : rows) order.push_back(r.candidate);
  CHECK(order == std::vector<std::string>{"c", "a", "b", "y", "z"});
}

TEST_CASE("random confidences partition and sort") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoredRow> rows;
  for (int i = 0; i < 1000; ++i) {
    double c = u(rng);
    if (i % 100 == 0) c = 0.5;
    if (i % 100 == 1) c = 0.2;
    rows.push_back({"c" + std::to_string(i), c, label_for(c), {}, {}});
  }
  sort_rows(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double c = *rows[i].confidence;
    int bands = (c > 0.5) + (c >= 0.2 && c <= 0.5) + (c < 0.2);
    CHECK(bands == 1);
    CHECK((rows[i].label == Label::kViable) == (c > 0.5));
    CHECK((rows[i].label == Label::kDiscarded) == (c < 0.2));
    if (i) CHECK(*rows[i - 1].confidence >= c);
  }
}

TEST_CASE("table text round trip") {
  RankingTable t;
  t.target = {"fic/H9C", 2201, "begin", "psalm"};
  t.comments = {"begin-7: to begin the usual psalms"};
  t.rows = {{"Sing the psalm.", 0.54752, Label::kViable, true, {}},
            {"Chant the psalm.", 0.47784, Label::kRejected, false, {}},
            {"Hum the psalm.", std::nullopt, Label::kNotInVocabulary, std::nullopt, {}}};
  std::ostringstream out;
  write_table(out, t);
  CHECK(out.str() ==
        "#target\tfic/H9C\t2201\tbegin\tpsalm\n"
        "# begin-7: to begin the usual psalms\n"
        "Sing the psalm.\t0.54752\tViable\t+\n"
        "Chant the psalm.\t0.47784\tRejected\t-\n"
        "Hum the psalm.\tNIV\tNotInVocabulary\n");
  std::istringstream in(out.str());
  auto back = read_tables(in, "mem");
  REQUIRE(back.size() == 1);
  CHECK(back[0].target == t.target);
  CHECK(back[0].comments == t.comments);
  REQUIRE(back[0].rows.size() == 3);
  CHECK(back[0].rows[0].confidence == 0.54752);
  CHECK(back[0].rows[1].gold == false);
  CHECK_FALSE(back[0].rows[2].gold);
  std::ostringstream again;
  write_table(again, back[0]);
  CHECK(again.str() == out.str());
}

TEST_CASE("table format errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_tables(in, "mem");
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("a\t0.5\tRejected\n") == 1);
  CHECK(line_of("#target\td\t1\tbegin\tx\na\t0.5\n") == 2);
  CHECK(line_of("#target\td\t1\tbegin\tx\na\t0.5\tGreat\n") == 2);
  CHECK(line_of("#target\td\t1\tbegin\tx\na\tNIV\tViable\n") == 2);
  CHECK(line_of("#target\td\t1\tbegin\tx\na\t1.5\tViable\n") == 2);
  CHECK(line_of("#target\td\t1\tbegin\tx\n\na\t0.5\tRejected\t?\n") == 3);
  CHECK(line_of("#target\td\tone\tbegin\tx\n") == 1);
  CHECK(line_of("#target\td\t1\tbegin\tx\na\t0.5\tRejected\t+\n") == 0);
}
