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
#include <limits>
#include <random>

#include "covert/error.hpp"
#include "covert/huffman.hpp"
#include "test_support.hpp"

using namespace covert;

namespace {

std::vector<std::size_t> lengths(const HuffmanTree& t) {
  std::vector<std::size_t> out;
  for (WordId w = 0; w < t.leaf_count(); ++w) out.push_back(t.code(w).size());
  return out;
}

double weighted(const std::vector<std::uint64_t>& counts, const std::vector<std::size_t>& len) {
  double s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += static_cast<double>(counts[i] * len[i]);
  return s;
}

// Minimum weighted length over every length assignment satisfying the Kraft
// inequality. Counts are sorted descending, so an optimal assignment has
// non-decreasing lengths and only those are enumerated.
void best_kraft(const std::vector<std::uint64_t>& counts, std::size_t i, std::size_t min_len,
                double kraft, double cost, double& best) {
  if (kraft > 1.0 + 1e-12 || cost >= best) return;
  if (i == counts.size()) {
    best = cost;
    return;
  }
  for (std::size_t l = min_len; l < counts.size(); ++l)
    best_kraft(counts, i + 1, l, kraft + std::ldexp(1.0, -static_cast<int>(l)),
               cost + static_cast<double>(counts[i] * l), best);
}

}  // namespace

TEST_CASE("two words get one-bit codes") {
  std::vector<std::uint64_t> c{5, 3};
  auto t = HuffmanTree::build(c);
  CHECK(lengths(t) == std::vector<std::size_t>{1, 1});
  CHECK(t.internal_count() == 1);
}

TEST_CASE("textbook frequencies 4,2,1,1") {
  std::vector<std::uint64_t> c{4, 2, 1, 1};
  CHECK(lengths(HuffmanTree::build(c)) == std::vector<std::size_t>{1, 2, 3, 3});
}

TEST_CASE("eleven equal words average between 3 and 4 bits") {
  std::vector<std::uint64_t> c(11, 1);
  auto t = HuffmanTree::build(c);
  double mean = t.mean_code_length(c);
  CHECK(mean >= 3.0);
  CHECK(mean <= 4.0);
  CHECK(std::abs(mean - std::log2(11.0)) < 0.2);
}

TEST_CASE("fewer than two words is rejected") {
  std::vector<std::uint64_t> one{3};
  CHECK_THROWS_AS(HuffmanTree::build(one), ContractViolation);
  CHECK_THROWS_AS(HuffmanTree::build(std::vector<std::uint64_t>{}), ContractViolation);
}

TEST_CASE("codes are prefix-free and paths start at the root") {
  std::mt19937_64 rng(3);
  for (std::size_t v = 2; v <= 40; ++v) {
    auto counts = covert::testing::random_counts(v, rng);
    auto t = HuffmanTree::build(counts);
    for (WordId a = 0; a < v; ++a) {
      REQUIRE(t.code(a).size() == t.path(a).size());
      CHECK(t.path(a)[0] == v - 2);
      for (auto node : t.path(a)) CHECK(node < v - 1);
      for (WordId b = 0; b < v; ++b) {
        if (a == b) continue;
        auto ca = t.code(a), cb = t.code(b);
        bool prefix = ca.size() <= cb.size() && std::equal(ca.begin(), ca.end(), cb.begin());
        CHECK_FALSE(prefix);
      }
    }
  }
}

TEST_CASE("Huffman lengths are optimal against Kraft enumeration") {
  std::mt19937_64 rng(11);
  for (std::size_t v = 2; v <= 8; ++v) {
    for (int trial = 0; trial < (v == 8 ? 3 : 10); ++trial) {
      auto counts = covert::testing::random_counts(v, rng);
      auto t = HuffmanTree::build(counts);
      double best = std::numeric_limits<double>::infinity();
      best_kraft(counts, 0, 1, 0.0, 0.0, best);
      CHECK(weighted(counts, lengths(t)) == doctest::Approx(best));
      double balanced = static_cast<double>(std::ceil(std::log2(static_cast<double>(v))));
      CHECK(t.mean_code_length(counts) <= balanced + 1e-12);
    }
  }
}

TEST_CASE("construction is deterministic") {
  std::vector<std::uint64_t> c{3, 3, 3, 2, 2, 1, 1, 1};
  auto a = HuffmanTree::build(c), b = HuffmanTree::build(c);
  for (WordId w = 0; w < c.size(); ++w) {
    CHECK(std::vector<std::uint8_t>(a.code(w).begin(), a.code(w).end()) ==
          std::vector<std::uint8_t>(b.code(w).begin(), b.code(w).end()));
  }
}
