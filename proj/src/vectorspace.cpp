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

#include "covert/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covert/error.hpp"

namespace covert {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("cosine_similarity: length mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw UndefinedResult("cosine_similarity: zero-norm vector");
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double confidence(std::span<const double> a, std::span<const double> b) {
  return std::max(0.0, cosine_similarity(a, b));
}

PhraseVector phrase_vector(const EmbeddingModel& model, std::span<const std::string> lemmas) {
  if (lemmas.empty()) throw ContractViolation("phrase_vector: no lemmas");
  PhraseVector pv;
  std::vector<double> sum(model.dim(), 0.0);
  for (const auto& lemma : lemmas) {
    auto id = model.vocab().find(lemma);
    if (!id) {
      pv.oov.push_back(lemma);
      continue;
    }
    pv.contributing.push_back(lemma);
    auto row = model.input_row(*id);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += row[d];
  }
  if (pv.contributing.empty()) return pv;
  const double inv = 1.0 / static_cast<double>(pv.contributing.size());
  for (auto& x : sum) x *= inv;
  pv.vector = std::move(sum);
  return pv;
}

std::vector<Neighbour> nearest_neighbours(const EmbeddingModel& model,
                                          std::span<const double> query, std::size_t k,
                                          const std::set<std::string>& exclude,
                                          ExecutionMode mode) {
  if (k == 0) return {};
  if (query.size() != model.dim()) throw ContractViolation("nearest_neighbours: query has wrong width");
  std::vector<double> scores(model.size());
  kernels::cosine_scores(model.input_matrix(), model.dim(), query, scores, mode);

  std::vector<WordId> ids;
  ids.reserve(model.size());
  for (WordId w = 0; w < model.size(); ++w)
    if (!exclude.contains(model.vocab().word(w))) ids.push_back(w);
  const std::size_t n = std::min(k, ids.size());
  auto better = [&](WordId x, WordId y) {
    return scores[x] != scores[y] ? scores[x] > scores[y] : x < y;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(), better);

  std::vector<Neighbour> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({model.vocab().word(ids[i]), scores[ids[i]]});
  return out;
}

std::vector<Neighbour> analogy(const EmbeddingModel& model, const std::string& a,
                               const std::string& b, const std::string& c, std::size_t k,
                               ExecutionMode mode) {
  auto ra = model.input_row(model.id(a));
  auto rb = model.input_row(model.id(b));
  auto rc = model.input_row(model.id(c));
  std::vector<double> q(model.dim());
  for (std::size_t d = 0; d < q.size(); ++d) q[d] = rb[d] - ra[d] + rc[d];
  if (std::all_of(q.begin(), q.end(), [](double x) { return x == 0.0; }))
    throw UndefinedResult("analogy: offset vector is zero");
  return nearest_neighbours(model, q, k, {a, b, c}, mode);
}

}  // namespace covert
