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

// CBOW and Skip-gram word embeddings trained with hierarchical softmax.
//
// A prediction conditions on a hidden vector h (the mean of one or more
// input rows) and scores a target word w by the walk from the Huffman root
// to w's leaf:
//
//   p(w | h) = prod_k sigmoid(sign_k * dot(h, node_k)),  sign_k = +1 for
//   branch bit 0 and -1 for bit 1.
//
// CBOW predicts the focus word from the mean of its window. Skip-gram makes
// one prediction per window word, each from the focus word's row alone.
// Windows never cross sentence boundaries and out-of-vocabulary tokens are
// dropped before windowing.

#ifndef COVERT_EMBEDDINGS_HPP_
#define COVERT_EMBEDDINGS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/corpus.hpp"
#include "covert/huffman.hpp"

namespace covert {

enum class TrainingMode { kCbow, kSkipGram };

std::optional<TrainingMode> parse_training_mode(std::string_view name);
std::string_view training_mode_name(TrainingMode mode);

struct TrainingConfig {
  TrainingMode mode = TrainingMode::kSkipGram;
  std::size_t window = 4;
  std::size_t dim = 100;
  std::size_t epochs = 5;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t seed = 1;
  std::uint64_t min_count = 1;
  std::size_t max_vocab = 10000;
  // Values above 1 switch to lock-free parallel updates, which are not
  // reproducible run to run.
  int threads = 1;

  /// Throws ContractViolation on any broken invariant.
  void validate() const;
};

class EmbeddingModel {
 public:
  /// Zero-initialized matrices. Requires |vocab| >= 2 and config.dim >= 1.
  EmbeddingModel(Vocabulary vocab, TrainingConfig config);

  /// Input rows uniform in [-0.5/D, 0.5/D] from `seed`; node rows zero.
  void initialize(std::uint64_t seed);

  const Vocabulary& vocab() const noexcept { return vocab_; }
  const TrainingConfig& config() const noexcept { return config_; }
  /// Replaces the schedule; `config.dim` must equal dim().
  void set_config(const TrainingConfig& config);
  const HuffmanTree& tree() const noexcept { return tree_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  std::size_t dim() const noexcept { return config_.dim; }

  std::span<double> input_row(WordId w);
  std::span<const double> input_row(WordId w) const;
  std::span<double> node_row(std::size_t node);
  std::span<const double> node_row(std::size_t node) const;

  /// Row-major V x D and (V-1) x D.
  std::span<const double> input_matrix() const noexcept { return input_; }
  std::span<const double> node_matrix() const noexcept { return nodes_; }
  std::span<double> mutable_input_matrix() noexcept { return input_; }
  std::span<double> mutable_node_matrix() noexcept { return nodes_; }

  /// Throws NotInVocabulary.
  WordId id(std::string_view word) const;

  bool all_finite() const;

  bool operator==(const EmbeddingModel& other) const;

 private:
  Vocabulary vocab_;
  TrainingConfig config_;
  HuffmanTree tree_;
  std::vector<double> input_;
  std::vector<double> nodes_;
};

/// Logistic function with its argument clamped to [-20, 20].
double sigmoid(double x);

/// p(word | context) under the tree. `context` must have model.dim() entries.
double leaf_probability(const EmbeddingModel& model, const HuffmanTree& tree,
                        std::span<const double> context, WordId word);
/// Throws NotInVocabulary for an unknown word.
double leaf_probability(const EmbeddingModel& model, const HuffmanTree& tree,
                        std::span<const double> context, std::string_view word);

/// One hierarchical-softmax prediction: `target` from the mean of the
/// `inputs` rows (repeats count with multiplicity).
struct Prediction {
  WordId target = 0;
  std::vector<WordId> inputs;
};

/// -log p(target | mean(inputs)).
double prediction_loss(const EmbeddingModel& model, const HuffmanTree& tree, const Prediction& p);

/// Gradient of prediction_loss; only touched rows appear.
struct SparseGradient {
  std::map<WordId, std::vector<double>> input;
  std::map<std::uint32_t, std::vector<double>> node;
};

SparseGradient prediction_gradient(const EmbeddingModel& model, const HuffmanTree& tree,
                                   const Prediction& p);

/// Work counters; `node_updates` counts node rows written.
struct StepStats {
  std::uint64_t predictions = 0;
  std::uint64_t node_updates = 0;
  std::uint64_t input_updates = 0;
  std::uint64_t skipped = 0;

  StepStats& operator+=(const StepStats& o);
};

/// Reusable buffers for the in-place update.
struct StepScratch {
  std::vector<double> hidden;
  std::vector<double> error;
};

/// Gradient-descent step of size `lr` on prediction_loss, in place.
StepStats apply_prediction(EmbeddingModel& model, const HuffmanTree& tree, const Prediction& p,
                           double lr, StepScratch& scratch);

/// In-vocabulary ids of a sentence, OOV tokens dropped.
std::vector<WordId> encode_sentence(const Vocabulary& vocab, const Sentence& sentence);

/// Window ids around `focus` (excluding it), truncated at the sentence ends.
std::vector<WordId> context_window(std::span<const WordId> ids, std::size_t focus,
                                   std::size_t window);

/// The prediction(s) a training position produces. CBOW yields at most one
/// (none when the window is empty); Skip-gram one per window word.
std::vector<Prediction> cbow_predictions(std::span<const WordId> ids, std::size_t focus,
                                         std::size_t window);
std::vector<Prediction> skipgram_predictions(std::span<const WordId> ids, std::size_t focus,
                                             std::size_t window);

/// One CBOW step for position `focus` of an encoded sentence.
StepStats train_example_cbow(EmbeddingModel& model, const HuffmanTree& tree, std::size_t focus,
                             std::span<const WordId> ids, double lr, StepScratch& scratch);

/// Skip-gram: one sequential step per (focus row, window word) pair.
StepStats train_example_skipgram(EmbeddingModel& model, const HuffmanTree& tree,
                                 std::size_t focus, std::span<const WordId> ids, double lr,
                                 StepScratch& scratch);

struct TrainStats {
  StepStats steps;
  std::uint64_t tokens = 0;
  double seconds = 0.0;
  double tokens_per_second = 0.0;
};

struct TrainResult {
  EmbeddingModel model;
  TrainStats stats;
};

/// Builds the vocabulary, initializes from config.seed and trains.
/// Throws ContractViolation for an empty corpus or a vocabulary under two words.
TrainResult train(const Corpus& corpus, const TrainingConfig& config);

/// Continues training an existing model over `corpus` with `config`'s
/// schedule (mode, window, epochs, learning rates, threads).
TrainStats train_model(EmbeddingModel& model, const Corpus& corpus, const TrainingConfig& config);

/// Text format: `V D`, V rows `word v1..vD`, `#nodes`, V-1 rows
/// `index v1..vD`, `#counts`, one line of V counts. Floats are written in
/// shortest round-trip form.
void write_model(std::ostream& out, const EmbeddingModel& model);
EmbeddingModel read_model(std::istream& in, const std::string& source_name);

void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace covert

#endif  // COVERT_EMBEDDINGS_HPP_
