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

#include "covert/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "covert/corpus.hpp"
#include "covert/error.hpp"

namespace covert::kernels {

namespace {

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_shapes(std::span<const double> matrix, std::size_t dim, std::span<const double> query,
                  std::span<double> out) {
  if (dim == 0 || query.size() != dim || matrix.size() != out.size() * dim)
    throw ContractViolation("cosine_scores: shape mismatch");
}

double row_cosine(const double* row, std::size_t dim, const double* query, double query_norm) {
  double dot = 0.0;
  double norm = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    dot += row[d] * query[d];
    norm += row[d] * row[d];
  }
  if (norm == 0.0) return 0.0;
  double c = dot / (std::sqrt(norm) * query_norm);
  return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

LemmaCounts count_lemmas(std::span<const Sentence> sentences) {
  LemmaCounts counts;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) ++counts[t.lemma];
  return counts;
}

void cosine_scores(std::span<const double> matrix, std::size_t dim,
                   std::span<const double> query, std::span<double> out) {
  check_shapes(matrix, dim, query, out);
  const double qn = std::sqrt(squared_norm(query));
  if (qn == 0.0) throw UndefinedResult("cosine_scores: zero-norm query");
  for (std::size_t r = 0; r < out.size(); ++r)
    out[r] = row_cosine(matrix.data() + r * dim, dim, query.data(), qn);
}

}  // namespace serial

namespace omp {

LemmaCounts count_lemmas(std::span<const Sentence> sentences) {
#ifdef _OPENMP
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
  std::vector<LemmaCounts> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      for (const auto& t : sentences[static_cast<std::size_t>(i)].tokens) ++local[t.lemma];
  }
  LemmaCounts merged;
  for (auto& local : partial)
    for (auto& [lemma, c] : local) merged[lemma] += c;
  return merged;
#else
  return serial::count_lemmas(sentences);
#endif
}

void cosine_scores(std::span<const double> matrix, std::size_t dim,
                   std::span<const double> query, std::span<double> out) {
  check_shapes(matrix, dim, query, out);
  const double qn = std::sqrt(squared_norm(query));
  if (qn == 0.0) throw UndefinedResult("cosine_scores: zero-norm query");
  const auto rows = static_cast<std::ptrdiff_t>(out.size());
  const double* m = matrix.data();
  const double* q = query.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r)
    o[r] = row_cosine(m + static_cast<std::size_t>(r) * dim, dim, q, qn);
}

}  // namespace omp

LemmaCounts count_lemmas(std::span<const Sentence> sentences, ExecutionMode mode) {
  return mode == ExecutionMode::kParallel ? omp::count_lemmas(sentences)
                                          : serial::count_lemmas(sentences);
}

void cosine_scores(std::span<const double> matrix, std::size_t dim, std::span<const double> query,
                   std::span<double> out, ExecutionMode mode) {
  if (mode == ExecutionMode::kParallel)
    omp::cosine_scores(matrix, dim, query, out);
  else
    serial::cosine_scores(matrix, dim, query, out);
}

}  // namespace covert::kernels
