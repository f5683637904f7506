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

// End-to-end wiring: configuration, target extraction, candidate harvest
// and ranking over one test corpus.

#ifndef COVERT_PIPELINE_HPP_
#define COVERT_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "covert/corpus.hpp"
#include "covert/embeddings.hpp"
#include "covert/metonymy.hpp"
#include "covert/ranking.hpp"

namespace covert {

/// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnvVar = "COVERT_CONFIG";

struct PipelineConfig {
  std::filesystem::path train_corpus;
  std::filesystem::path test_corpus;
  CorpusFormat corpus_format = CorpusFormat::kVertical;
  TrainingConfig training;
  std::vector<VerbSpec> verbs = default_verbs();
  Thresholds thresholds;
  std::size_t max_gap = kDefaultMaxGap;
  std::optional<std::filesystem::path> gold_targets;
  std::optional<std::filesystem::path> gold_labels;
  std::filesystem::path output_dir = ".";
  bool inject_target_verb = false;

  /// Throws ContractViolation on any broken invariant.
  void validate() const;
};

/// JSON object with the fields above; unknown keys are rejected and missing
/// keys keep their defaults. Throws FormatError.
PipelineConfig parse_pipeline_config(const std::string& json_text, const std::string& source_name);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string to_json(const PipelineConfig& config);

/// The path in $COVERT_CONFIG, if set and non-empty.
std::optional<std::filesystem::path> default_config_path();

/// JSON record of a training run (config incl. seed, and throughput).
std::string training_record(const TrainingConfig& config, const TrainStats& stats,
                            const std::filesystem::path& corpus);

/// Gold targets when configured, else automatic extraction.
std::vector<MetonymyTarget> resolve_targets(const PipelineConfig& config, const Corpus& corpus);

/// One ranking table per target, in target order; the first comment line of
/// each table is the target sentence text.
std::vector<RankingTable> run_paraphrase(const PipelineConfig& config, const EmbeddingModel& model,
                                         const Corpus& corpus,
                                         const std::vector<MetonymyTarget>& targets);

/// "begin-1", "begin-2", ... numbered per verb in table order.
std::vector<std::string> table_names(std::span<const RankingTable> tables);

std::string sentence_text(const Sentence& s);

}  // namespace covert

#endif  // COVERT_PIPELINE_HPP_
