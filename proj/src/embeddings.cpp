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

#include "covert/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "covert/error.hpp"

namespace covert {

namespace {

constexpr double kSigmoidClamp = 20.0;

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void mean_of_rows(const EmbeddingModel& model, std::span<const WordId> rows, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (WordId w : rows) {
    auto r = model.input_row(w);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += r[d];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (auto& x : out) x *= inv;
}

void check_prediction(const EmbeddingModel& model, const Prediction& p) {
  if (p.inputs.empty()) throw ContractViolation("prediction without inputs");
  if (p.target >= model.size()) throw ContractViolation("prediction target out of range");
  for (WordId w : p.inputs)
    if (w >= model.size()) throw ContractViolation("prediction input out of range");
}

double learning_rate(const TrainingConfig& c, std::uint64_t processed, std::uint64_t total) {
  if (total == 0) return c.lr_start;
  double frac = static_cast<double>(processed) / static_cast<double>(total);
  return std::max(c.lr_end, c.lr_start - (c.lr_start - c.lr_end) * frac);
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::optional<TrainingMode> parse_training_mode(std::string_view name) {
  if (name == "cbow") return TrainingMode::kCbow;
  if (name == "skipgram") return TrainingMode::kSkipGram;
  return std::nullopt;
}

std::string_view training_mode_name(TrainingMode mode) {
  return mode == TrainingMode::kCbow ? "cbow" : "skipgram";
}

void TrainingConfig::validate() const {
  if (window < 1) throw ContractViolation("window must be >= 1");
  if (dim < 1) throw ContractViolation("dim must be >= 1");
  if (epochs < 1) throw ContractViolation("epochs must be >= 1");
  if (!(lr_end > 0.0)) throw ContractViolation("lr_end must be > 0");
  if (!(lr_start >= lr_end)) throw ContractViolation("lr_start must be >= lr_end");
  if (min_count < 1) throw ContractViolation("min_count must be >= 1");
  if (max_vocab < 1) throw ContractViolation("max_vocab must be >= 1");
  if (threads < 1) throw ContractViolation("threads must be >= 1");
}

StepStats& StepStats::operator+=(const StepStats& o) {
  predictions += o.predictions;
  node_updates += o.node_updates;
  input_updates += o.input_updates;
  skipped += o.skipped;
  return *this;
}

// ---------------------------------------------------------------------------
// EmbeddingModel

EmbeddingModel::EmbeddingModel(Vocabulary vocab, TrainingConfig config)
    : vocab_(std::move(vocab)), config_(config), tree_(HuffmanTree::build(vocab_)) {
  if (config_.dim < 1) throw ContractViolation("dim must be >= 1");
  input_.assign(vocab_.size() * config_.dim, 0.0);
  nodes_.assign((vocab_.size() - 1) * config_.dim, 0.0);
}

void EmbeddingModel::set_config(const TrainingConfig& config) {
  if (config.dim != config_.dim) throw ContractViolation("config dim does not match the model");
  config_ = config;
}

void EmbeddingModel::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double half = 0.5 / static_cast<double>(config_.dim);
  std::uniform_real_distribution<double> dist(-half, half);
  for (auto& x : input_) x = dist(rng);
  std::fill(nodes_.begin(), nodes_.end(), 0.0);
}

std::span<double> EmbeddingModel::input_row(WordId w) {
  return std::span<double>(input_).subspan(static_cast<std::size_t>(w) * config_.dim, config_.dim);
}

std::span<const double> EmbeddingModel::input_row(WordId w) const {
  return std::span<const double>(input_).subspan(static_cast<std::size_t>(w) * config_.dim,
                                                 config_.dim);
}

std::span<double> EmbeddingModel::node_row(std::size_t node) {
  return std::span<double>(nodes_).subspan(node * config_.dim, config_.dim);
}

std::span<const double> EmbeddingModel::node_row(std::size_t node) const {
  return std::span<const double>(nodes_).subspan(node * config_.dim, config_.dim);
}

WordId EmbeddingModel::id(std::string_view word) const {
  auto w = vocab_.find(word);
  if (!w) throw NotInVocabulary(std::string(word));
  return *w;
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(input_.begin(), input_.end(), finite) &&
         std::all_of(nodes_.begin(), nodes_.end(), finite);
}

bool EmbeddingModel::operator==(const EmbeddingModel& other) const {
  if (size() != other.size() || dim() != other.dim()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& a = vocab_.entries()[i];
    const auto& b = other.vocab_.entries()[i];
    if (a.word != b.word || a.count != b.count) return false;
  }
  return input_ == other.input_ && nodes_ == other.nodes_;
}

// ---------------------------------------------------------------------------
// Hierarchical softmax

double sigmoid(double x) {
  x = std::clamp(x, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

double leaf_probability(const EmbeddingModel& model, const HuffmanTree& tree,
                        std::span<const double> context, WordId word) {
  if (context.size() != model.dim()) throw ContractViolation("context vector has wrong width");
  if (word >= tree.leaf_count()) throw ContractViolation("word id outside the tree");
  auto code = tree.code(word);
  auto path = tree.path(word);
  double p = 1.0;
  for (std::size_t k = 0; k < code.size(); ++k) {
    double x = dot(context.data(), model.node_row(path[k]).data(), model.dim());
    p *= sigmoid(code[k] == 0 ? x : -x);
  }
  return p;
}

double leaf_probability(const EmbeddingModel& model, const HuffmanTree& tree,
                        std::span<const double> context, std::string_view word) {
  return leaf_probability(model, tree, context, model.id(word));
}

double prediction_loss(const EmbeddingModel& model, const HuffmanTree& tree, const Prediction& p) {
  check_prediction(model, p);
  std::vector<double> h(model.dim());
  mean_of_rows(model, p.inputs, h);
  auto code = tree.code(p.target);
  auto path = tree.path(p.target);
  double loss = 0.0;
  for (std::size_t k = 0; k < code.size(); ++k) {
    double x = dot(h.data(), model.node_row(path[k]).data(), model.dim());
    loss -= std::log(sigmoid(code[k] == 0 ? x : -x));
  }
  return loss;
}

SparseGradient prediction_gradient(const EmbeddingModel& model, const HuffmanTree& tree,
                                   const Prediction& p) {
  check_prediction(model, p);
  const std::size_t dim = model.dim();
  std::vector<double> h(dim);
  mean_of_rows(model, p.inputs, h);
  std::vector<double> dh(dim, 0.0);
  SparseGradient grad;
  auto code = tree.code(p.target);
  auto path = tree.path(p.target);
  for (std::size_t k = 0; k < code.size(); ++k) {
    auto node = model.node_row(path[k]);
    double f = sigmoid(dot(h.data(), node.data(), dim));
    // dL/dx = f - (1 - bit).
    double g = f - (1.0 - code[k]);
    auto& gn = grad.node[path[k]];
    gn.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      gn[d] = g * h[d];
      dh[d] += g * node[d];
    }
  }
  const double inv = 1.0 / static_cast<double>(p.inputs.size());
  for (WordId w : p.inputs) {
    auto& gi = grad.input[w];
    gi.resize(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) gi[d] += inv * dh[d];
  }
  return grad;
}

StepStats apply_prediction(EmbeddingModel& model, const HuffmanTree& tree, const Prediction& p,
                           double lr, StepScratch& scratch) {
  const std::size_t dim = model.dim();
  scratch.hidden.resize(dim);
  scratch.error.assign(dim, 0.0);
  mean_of_rows(model, p.inputs, scratch.hidden);
  const double* h = scratch.hidden.data();
  double* err = scratch.error.data();

  auto code = tree.code(p.target);
  auto path = tree.path(p.target);
  for (std::size_t k = 0; k < code.size(); ++k) {
    double* node = model.node_row(path[k]).data();
    double f = sigmoid(dot(h, node, dim));
    double g = lr * ((1.0 - code[k]) - f);
    for (std::size_t d = 0; d < dim; ++d) err[d] += g * node[d];
    for (std::size_t d = 0; d < dim; ++d) node[d] += g * h[d];
  }
  const double inv = 1.0 / static_cast<double>(p.inputs.size());
  for (WordId w : p.inputs) {
    double* row = model.input_row(w).data();
    for (std::size_t d = 0; d < dim; ++d) row[d] += inv * err[d];
  }

  StepStats s;
  s.predictions = 1;
  s.node_updates = code.size();
  s.input_updates = p.inputs.size();
  return s;
}

// ---------------------------------------------------------------------------
// Training positions

std::vector<WordId> encode_sentence(const Vocabulary& vocab, const Sentence& sentence) {
  std::vector<WordId> ids;
  ids.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens)
    if (auto w = vocab.find(t.lemma)) ids.push_back(*w);
  return ids;
}

std::vector<WordId> context_window(std::span<const WordId> ids, std::size_t focus,
                                   std::size_t window) {
  std::vector<WordId> ctx;
  if (focus >= ids.size()) return ctx;
  std::size_t lo = focus >= window ? focus - window : 0;
  std::size_t hi = std::min(ids.size(), focus + window + 1);
  for (std::size_t i = lo; i < hi; ++i)
    if (i != focus) ctx.push_back(ids[i]);
  return ctx;
}

std::vector<Prediction> cbow_predictions(std::span<const WordId> ids, std::size_t focus,
                                         std::size_t window) {
  auto ctx = context_window(ids, focus, window);
  if (ctx.empty()) return {};
  return {Prediction{ids[focus], std::move(ctx)}};
}

std::vector<Prediction> skipgram_predictions(std::span<const WordId> ids, std::size_t focus,
                                             std::size_t window) {
  std::vector<Prediction> out;
  for (WordId c : context_window(ids, focus, window)) out.push_back(Prediction{c, {ids[focus]}});
  return out;
}

StepStats train_example_cbow(EmbeddingModel& model, const HuffmanTree& tree, std::size_t focus,
                             std::span<const WordId> ids, double lr, StepScratch& scratch) {
  auto preds = cbow_predictions(ids, focus, model.config().window);
  if (preds.empty()) return StepStats{0, 0, 0, 1};
  return apply_prediction(model, tree, preds.front(), lr, scratch);
}

StepStats train_example_skipgram(EmbeddingModel& model, const HuffmanTree& tree,
                                 std::size_t focus, std::span<const WordId> ids, double lr,
                                 StepScratch& scratch) {
  auto preds = skipgram_predictions(ids, focus, model.config().window);
  if (preds.empty()) return StepStats{0, 0, 0, 1};
  StepStats total;
  for (const auto& p : preds) total += apply_prediction(model, tree, p, lr, scratch);
  return total;
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

StepStats train_position(EmbeddingModel& model, const HuffmanTree& tree, TrainingMode mode,
                         std::size_t focus, std::span<const WordId> ids, double lr,
                         StepScratch& scratch) {
  return mode == TrainingMode::kCbow ? train_example_cbow(model, tree, focus, ids, lr, scratch)
                                     : train_example_skipgram(model, tree, focus, ids, lr, scratch);
}

}  // namespace

TrainStats train_model(EmbeddingModel& model, const Corpus& corpus, const TrainingConfig& config) {
  config.validate();
  if (config.dim != model.dim()) throw ContractViolation("config dim does not match the model");

  model.set_config(config);
  EmbeddingModel& m = model;
  const HuffmanTree& tree = m.tree();

  std::vector<std::vector<WordId>> encoded;
  encoded.reserve(corpus.sentences.size());
  std::uint64_t tokens_per_epoch = 0;
  for (const auto& s : corpus.sentences) {
    encoded.push_back(encode_sentence(m.vocab(), s));
    tokens_per_epoch += encoded.back().size();
  }
  const std::uint64_t total = tokens_per_epoch * config.epochs;

  const auto start = std::chrono::steady_clock::now();
  TrainStats stats;
  if (config.threads <= 1) {
    StepScratch scratch;
    std::uint64_t processed = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      for (const auto& ids : encoded) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          double lr = learning_rate(config, processed, total);
          stats.steps += train_position(m, tree, config.mode, i, ids, lr, scratch);
          ++processed;
        }
      }
    }
    stats.tokens = processed;
  } else {
    // Hogwild: workers race on shared rows without locks.
    std::atomic<std::uint64_t> processed{0};
    std::atomic<std::uint64_t> predictions{0}, node_updates{0}, input_updates{0}, skipped{0};
    const auto n = static_cast<std::ptrdiff_t>(encoded.size());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
#pragma omp parallel num_threads(config.threads)
      {
        StepScratch scratch;
        StepStats local;
#pragma omp for schedule(dynamic, 64)
        for (std::ptrdiff_t si = 0; si < n; ++si) {
          const auto& ids = encoded[static_cast<std::size_t>(si)];
          for (std::size_t i = 0; i < ids.size(); ++i) {
            double lr = learning_rate(config, processed.fetch_add(1, std::memory_order_relaxed), total);
            local += train_position(m, tree, config.mode, i, ids, lr, scratch);
          }
        }
        predictions += local.predictions;
        node_updates += local.node_updates;
        input_updates += local.input_updates;
        skipped += local.skipped;
      }
    }
    stats.tokens = processed.load();
    stats.steps = StepStats{predictions.load(), node_updates.load(), input_updates.load(), skipped.load()};
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  stats.tokens_per_second = stats.seconds > 0.0 ? static_cast<double>(stats.tokens) / stats.seconds : 0.0;
  return stats;
}

TrainResult train(const Corpus& corpus, const TrainingConfig& config) {
  config.validate();
  if (corpus.token_count() == 0) throw ContractViolation("cannot train on an empty corpus");
  Vocabulary vocab = build_vocabulary(corpus, config.max_vocab, config.min_count);
  if (vocab.empty()) throw ContractViolation("empty vocabulary");
  if (vocab.size() < 2) throw ContractViolation("vocabulary needs at least two words");
  EmbeddingModel model(std::move(vocab), config);
  model.initialize(config.seed);
  TrainStats stats = train_model(model, corpus, config);
  return TrainResult{std::move(model), stats};
}

// ---------------------------------------------------------------------------
// Persistence

void write_model(std::ostream& out, const EmbeddingModel& model) {
  const std::size_t v = model.size();
  const std::size_t dim = model.dim();
  std::string buf;
  buf += std::to_string(v) + " " + std::to_string(dim) + "\n";
  auto row = [&](std::span<const double> r) {
    for (double x : r) {
      buf += ' ';
      append_double(buf, x);
    }
    buf += '\n';
  };
  for (std::size_t w = 0; w < v; ++w) {
    const auto& word = model.vocab().word(static_cast<WordId>(w));
    if (word.find_first_of(" \t\n\r") != std::string::npos)
      throw ContractViolation("word '" + word + "' contains whitespace and cannot be saved");
    buf += word;
    row(model.input_row(static_cast<WordId>(w)));
  }
  buf += "#nodes\n";
  for (std::size_t n = 0; n + 1 < v; ++n) {
    buf += std::to_string(n);
    row(model.node_row(n));
  }
  buf += "#counts\n";
  for (std::size_t w = 0; w < v; ++w) {
    if (w) buf += ' ';
    buf += std::to_string(model.vocab().count(static_cast<WordId>(w)));
  }
  buf += '\n';
  out << buf;
  if (!out) throw IoError("failed writing model");
}

namespace {

struct RowParser {
  const std::string& source;

  std::vector<std::string_view> fields(std::string_view line) const {
    std::vector<std::string_view> f;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      std::size_t s = i;
      while (i < line.size() && line[i] != ' ') ++i;
      if (i > s) f.push_back(line.substr(s, i - s));
    }
    return f;
  }

  template <typename T>
  T number(std::string_view text, std::size_t line_no) const {
    T value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw FormatError(source, line_no, "bad number '" + std::string(text) + "'");
    return value;
  }
};

}  // namespace

EmbeddingModel read_model(std::istream& in, const std::string& source_name) {
  RowParser parse{source_name};
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](const char* what) -> std::string_view {
    if (!std::getline(in, line)) throw FormatError(source_name, line_no + 1, std::string("truncated: expected ") + what);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  auto header = parse.fields(next_line("header"));
  if (header.size() != 2) throw FormatError(source_name, line_no, "header must be 'V D'");
  const auto v = parse.number<std::size_t>(header[0], line_no);
  const auto dim = parse.number<std::size_t>(header[1], line_no);
  if (v < 2 || dim < 1) throw FormatError(source_name, line_no, "model needs V >= 2 and D >= 1");

  std::vector<std::string> words;
  std::vector<double> input;
  words.reserve(v);
  input.reserve(v * dim);
  for (std::size_t w = 0; w < v; ++w) {
    auto f = parse.fields(next_line("word row"));
    if (f.size() != dim + 1)
      throw FormatError(source_name, line_no, "word row has " + std::to_string(f.size()) + " fields, expected " + std::to_string(dim + 1));
    if (f[0] == "#nodes") throw FormatError(source_name, line_no, "row count mismatch: fewer than V word rows");
    words.emplace_back(f[0]);
    for (std::size_t d = 0; d < dim; ++d) input.push_back(parse.number<double>(f[d + 1], line_no));
  }
  if (next_line("#nodes") != "#nodes") throw FormatError(source_name, line_no, "expected '#nodes' sentinel (row count mismatch?)");
  std::vector<double> nodes;
  nodes.reserve((v - 1) * dim);
  for (std::size_t n = 0; n + 1 < v; ++n) {
    auto f = parse.fields(next_line("node row"));
    if (f.size() != dim + 1) throw FormatError(source_name, line_no, "node row has wrong field count");
    if (parse.number<std::size_t>(f[0], line_no) != n) throw FormatError(source_name, line_no, "node rows out of order");
    for (std::size_t d = 0; d < dim; ++d) nodes.push_back(parse.number<double>(f[d + 1], line_no));
  }
  if (next_line("#counts") != "#counts") throw FormatError(source_name, line_no, "expected '#counts' sentinel (row count mismatch?)");
  auto cf = parse.fields(next_line("counts"));
  if (cf.size() != v) throw FormatError(source_name, line_no, "expected " + std::to_string(v) + " counts");
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(v);
  for (std::size_t w = 0; w < v; ++w) entries.push_back({words[w], parse.number<std::uint64_t>(cf[w], line_no)});
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") throw FormatError(source_name, line_no, "trailing data after counts");
  }

  Vocabulary vocab;
  try {
    vocab = Vocabulary::from_entries(std::move(entries), v);
  } catch (const ContractViolation& e) {
    throw FormatError(source_name, 0, e.what());
  }
  if (vocab.size() != v) throw FormatError(source_name, 0, "duplicate words");
  TrainingConfig config;
  config.dim = dim;
  config.max_vocab = v;
  EmbeddingModel model(std::move(vocab), config);
  std::copy(input.begin(), input.end(), model.mutable_input_matrix().begin());
  std::copy(nodes.begin(), nodes.end(), model.mutable_node_matrix().begin());
  return model;
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model '" + path.string() + "'");
  write_model(out, model);
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  return read_model(in, path.string());
}

}  // namespace covert
