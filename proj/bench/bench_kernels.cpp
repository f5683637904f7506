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

// Serial reference vs OpenMP kernels.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "covert/corpus.hpp"
#include "covert/kernels.hpp"

namespace {

using covert::ExecutionMode;

std::vector<double> random_matrix(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> m(rows * dim);
  for (auto& x : m) x = n(rng);
  return m;
}

std::vector<covert::Sentence> random_sentences(std::size_t count) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> word(0, 4999);
  std::vector<covert::Sentence> out(count);
  for (auto& s : out)
    for (int i = 0; i < 20; ++i) {
      std::string w = "w" + std::to_string(word(rng));
      s.tokens.push_back({w, w, covert::Pos::kNoun});
    }
  return out;
}

void BM_CosineScores(benchmark::State& state, ExecutionMode mode) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), dim = 100;
  const auto m = random_matrix(rows, dim);
  const auto q = random_matrix(1, dim);
  std::vector<double> out(rows);
  for (auto _ : state) {
    covert::kernels::cosine_scores(m, dim, q, out, mode);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

void BM_CountLemmas(benchmark::State& state, ExecutionMode mode) {
  const auto sentences = random_sentences(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(covert::kernels::count_lemmas(sentences, mode));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}

BENCHMARK_CAPTURE(BM_CosineScores, serial, ExecutionMode::kSerial)->Arg(10000)->Arg(100000);
BENCHMARK_CAPTURE(BM_CosineScores, omp, ExecutionMode::kParallel)->Arg(10000)->Arg(100000);
BENCHMARK_CAPTURE(BM_CountLemmas, serial, ExecutionMode::kSerial)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(BM_CountLemmas, omp, ExecutionMode::kParallel)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
