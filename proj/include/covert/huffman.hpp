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

#ifndef COVERT_HUFFMAN_HPP_
#define COVERT_HUFFMAN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "covert/corpus.hpp"

namespace covert {

/// Binary Huffman code over vocabulary frequencies, used as the output
/// tree of hierarchical softmax.
///
/// Leaves are word ids [0, V); internal nodes are numbered [0, V-1) in
/// creation order, so node V-2 is the root and internal node i owns row i
/// of the model's node matrix. For every word, `path(w)[k]` is the k-th
/// internal node on the walk from the root and `code(w)[k]` the branch taken
/// there (0 = first-merged child, 1 = second).
class HuffmanTree {
 public:
  /// Throws ContractViolation when fewer than two words are given.
  static HuffmanTree build(std::span<const std::uint64_t> counts);
  static HuffmanTree build(const Vocabulary& vocab);

  std::size_t leaf_count() const noexcept { return codes_.size(); }
  std::size_t internal_count() const noexcept { return leaf_count() - 1; }

  std::span<const std::uint8_t> code(WordId w) const { return codes_.at(w); }
  std::span<const std::uint32_t> path(WordId w) const { return paths_.at(w); }

  std::size_t max_depth() const;

  /// Sum of count(w) * |code(w)| divided by the total count.
  double mean_code_length(std::span<const std::uint64_t> counts) const;

 private:
  std::vector<std::vector<std::uint8_t>> codes_;
  std::vector<std::vector<std::uint32_t>> paths_;
};

}  // namespace covert

#endif  // COVERT_HUFFMAN_HPP_
