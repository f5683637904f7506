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

// Similarity queries over a trained model.

#ifndef COVERT_VECTORSPACE_HPP_
#define COVERT_VECTORSPACE_HPP_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "covert/embeddings.hpp"
#include "covert/kernels.hpp"

namespace covert {

/// (a.b) / (|a||b|), clamped to [-1, 1] against rounding.
/// Throws UndefinedResult for a zero-norm input, ContractViolation on a
/// length mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// max(0, cosine_similarity(a, b)).
double confidence(std::span<const double> a, std::span<const double> b);

struct PhraseVector {
  std::vector<double> vector;  // empty when no lemma is in the vocabulary
  std::vector<std::string> contributing;
  std::vector<std::string> oov;

  bool has_vector() const noexcept { return !contributing.empty(); }
};

/// Mean of the input rows of the in-vocabulary lemmas. Repeats count with
/// multiplicity. Throws ContractViolation for an empty lemma list.
PhraseVector phrase_vector(const EmbeddingModel& model, std::span<const std::string> lemmas);

struct Neighbour {
  std::string word;
  double score = 0.0;
};

/// Top-k words by cosine to `query`, descending, ties by vocabulary id.
/// Rows with zero norm score 0.
std::vector<Neighbour> nearest_neighbours(const EmbeddingModel& model,
                                          std::span<const double> query, std::size_t k,
                                          const std::set<std::string>& exclude = {},
                                          ExecutionMode mode = ExecutionMode::kSerial);

/// Neighbours of vec(b) - vec(a) + vec(c), excluding a, b and c.
/// Throws NotInVocabulary for an unknown word and UndefinedResult when the
/// offset vector is zero.
std::vector<Neighbour> analogy(const EmbeddingModel& model, const std::string& a,
                               const std::string& b, const std::string& c, std::size_t k,
                               ExecutionMode mode = ExecutionMode::kSerial);

}  // namespace covert

#endif  // COVERT_VECTORSPACE_HPP_
