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

#include "covert/huffman.hpp"

#include <algorithm>
#include <queue>
#include <utility>

#include "covert/error.hpp"

namespace covert {

HuffmanTree HuffmanTree::build(std::span<const std::uint64_t> counts) {
  const std::size_t v = counts.size();
  if (v < 2) throw ContractViolation("Huffman tree needs at least two words");

  // Node ids: leaves [0, v), internal nodes v + i. Ties pop the lowest id.
  using Item = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t i = 0; i < v; ++i) heap.emplace(counts[i], i);

  std::vector<std::size_t> parent(2 * v - 1, 0);
  std::vector<std::uint8_t> branch(2 * v - 1, 0);
  for (std::size_t next = v; next < 2 * v - 1; ++next) {
    auto [c0, first] = heap.top();
    heap.pop();
    auto [c1, second] = heap.top();
    heap.pop();
    parent[first] = next;
    parent[second] = next;
    branch[first] = 0;
    branch[second] = 1;
    heap.emplace(c0 + c1, next);
  }

  const std::size_t root = 2 * v - 2;
  HuffmanTree tree;
  tree.codes_.resize(v);
  tree.paths_.resize(v);
  for (std::size_t w = 0; w < v; ++w) {
    auto& code = tree.codes_[w];
    auto& path = tree.paths_[w];
    for (std::size_t n = w; n != root; n = parent[n]) {
      code.push_back(branch[n]);
      path.push_back(static_cast<std::uint32_t>(parent[n] - v));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
  }
  return tree;
}

HuffmanTree HuffmanTree::build(const Vocabulary& vocab) {
  std::vector<std::uint64_t> counts;
  counts.reserve(vocab.size());
  for (const auto& e : vocab.entries()) counts.push_back(e.count);
  return build(counts);
}

std::size_t HuffmanTree::max_depth() const {
  std::size_t d = 0;
  for (const auto& c : codes_) d = std::max(d, c.size());
  return d;
}

double HuffmanTree::mean_code_length(std::span<const std::uint64_t> counts) const {
  if (counts.size() != codes_.size()) throw ContractViolation("mean_code_length: count size mismatch");
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    weighted += static_cast<double>(counts[w]) * static_cast<double>(codes_[w].size());
    total += static_cast<double>(counts[w]);
  }
  if (total == 0.0) throw UndefinedResult("mean_code_length: zero total count");
  return weighted / total;
}

}  // namespace covert
