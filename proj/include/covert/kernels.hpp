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

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; the two must
// agree (exactly for counts, to rounding for floating point). The tests and
// bench/ compare them.

#ifndef COVERT_KERNELS_HPP_
#define COVERT_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>

namespace covert {

struct Sentence;

enum class ExecutionMode { kSerial, kParallel };

using LemmaCounts = std::unordered_map<std::string, std::uint64_t>;

namespace kernels {

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

namespace serial {

LemmaCounts count_lemmas(std::span<const Sentence> sentences);

/// out[r] = cos(matrix row r, query); zero-norm rows score 0.
/// `matrix` is row-major with `dim` columns; query must have nonzero norm.
void cosine_scores(std::span<const double> matrix, std::size_t dim,
                   std::span<const double> query, std::span<double> out);

}  // namespace serial

namespace omp {

/// Per-thread partial maps merged at the end; the result is identical to
/// the serial count since merging is a sum.
LemmaCounts count_lemmas(std::span<const Sentence> sentences);

void cosine_scores(std::span<const double> matrix, std::size_t dim,
                   std::span<const double> query, std::span<double> out);

}  // namespace omp

LemmaCounts count_lemmas(std::span<const Sentence> sentences, ExecutionMode mode);

void cosine_scores(std::span<const double> matrix, std::size_t dim, std::span<const double> query,
                   std::span<double> out, ExecutionMode mode);

}  // namespace kernels
}  // namespace covert

#endif  // COVERT_KERNELS_HPP_
