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

// covert: command-line front end.
//
//   covert vocab      --corpus FILE [--out FILE]
//   covert train      --corpus FILE --mode cbow|skipgram --out MODEL
//   covert query      --model MODEL neighbors|analogy|similarity ...
//   covert targets    --corpus FILE [--gold-targets FILE]
//   covert paraphrase --model MODEL --corpus FILE --out-dir DIR
//   covert eval       (--fixture FILE | --tables FILE...) [--gold FILE] [--pr-csv FILE]
//   covert prcurve    (--fixture FILE | --tables FILE...) --out FILE
//
// A JSON config (--config, else $COVERT_CONFIG) supplies defaults; flags win.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "covert/corpus.hpp"
#include "covert/embeddings.hpp"
#include "covert/error.hpp"
#include "covert/eval.hpp"
#include "covert/metonymy.hpp"
#include "covert/pipeline.hpp"
#include "covert/ranking.hpp"
#include "covert/vectorspace.hpp"

namespace fs = std::filesystem;
using namespace covert;

namespace {

struct Options {
  std::string config;
  std::string corpus;
  std::string format;
  std::string out;
  std::string model;
  std::string mode;
  std::string gold_targets;
  std::string gold;
  std::string fixture;
  std::vector<std::string> tables;
  std::string niv = "exclude";
  std::string pr_csv;
  std::vector<std::uint64_t> counts;
  std::size_t k = 10;
  std::vector<std::string> words;
  bool by_verb = false;
  bool inject = false;
  TrainingConfig training;
  Thresholds thresholds;
};

// One flag may be registered on several subcommands.
struct Flag {
  std::vector<CLI::Option*> options;

  void add(CLI::Option* o) { options.push_back(o); }
  bool given() const {
    return std::any_of(options.begin(), options.end(), [](auto* o) { return o->count() > 0; });
  }
};

struct Overrides {
  Flag format;
  Flag dim;
  Flag window;
  Flag epochs;
  Flag seed;
  Flag threads;
  Flag lr_start;
  Flag lr_end;
  Flag min_count;
  Flag max_vocab;
  Flag discard;
  Flag viable;
  Flag inject;
};

PipelineConfig base_config(const Options& o) {
  if (!o.config.empty()) return load_pipeline_config(o.config);
  if (auto p = default_config_path()) return load_pipeline_config(*p);
  return {};
}

// Flags over config over defaults.
PipelineConfig effective_config(const Options& o, const Overrides& ov) {
  PipelineConfig c = base_config(o);
  if (ov.format.given()) c.corpus_format = *parse_corpus_format(o.format);
  auto& t = c.training;
  if (ov.dim.given()) t.dim = o.training.dim;
  if (ov.window.given()) t.window = o.training.window;
  if (ov.epochs.given()) t.epochs = o.training.epochs;
  if (ov.seed.given()) t.seed = o.training.seed;
  if (ov.threads.given()) t.threads = o.training.threads;
  if (ov.lr_start.given()) t.lr_start = o.training.lr_start;
  if (ov.lr_end.given()) t.lr_end = o.training.lr_end;
  if (ov.min_count.given()) t.min_count = o.training.min_count;
  if (ov.max_vocab.given()) t.max_vocab = o.training.max_vocab;
  if (ov.discard.given()) c.thresholds.discard = o.thresholds.discard;
  if (ov.viable.given()) c.thresholds.viable = o.thresholds.viable;
  if (ov.inject.given()) c.inject_target_verb = o.inject;
  if (!o.gold_targets.empty()) c.gold_targets = o.gold_targets;
  if (!o.gold.empty()) c.gold_labels = o.gold;
  if (!o.mode.empty()) t.mode = *parse_training_mode(o.mode);
  c.validate();
  return c;
}

fs::path corpus_path(const Options& o, const PipelineConfig& c, bool test) {
  if (!o.corpus.empty()) return o.corpus;
  const fs::path& p = test ? c.test_corpus : c.train_corpus;
  if (!p.empty()) return p;
  const fs::path& other = test ? c.train_corpus : c.test_corpus;
  if (!other.empty()) return other;
  throw ContractViolation("no corpus given (use --corpus or a config file)");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << v;
  return ss.str();
}

std::vector<RankingTable> load_eval_tables(const Options& o, const PipelineConfig& c) {
  std::vector<RankingTable> tables;
  if (!o.fixture.empty()) tables = load_fixture(o.fixture);
  for (const auto& p : o.tables) {
    std::vector<fs::path> files;
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".tsv") files.push_back(e.path());
      std::sort(files.begin(), files.end());
    } else {
      files.emplace_back(p);
    }
    for (const auto& f : files)
      for (auto& t : load_tables(f)) tables.push_back(std::move(t));
  }
  if (o.fixture.empty() && o.tables.empty()) throw ContractViolation("give --fixture or --tables");
  if (c.gold_labels) apply_gold(tables, load_gold_labels(*c.gold_labels));
  return tables;
}

NivPolicy niv_policy(const Options& o) { return *parse_niv_policy(o.niv); }

std::string report_line(const std::string& name, const ConfusionReport& r) {
  const auto& m = r.matrix;
  std::string s = name + "\ttp=" + std::to_string(m.tp) + "\ttn=" + std::to_string(m.tn) +
                  "\tfp=" + std::to_string(m.fp) + "\tfn=" + std::to_string(m.fn) +
                  "\tniv=" + std::to_string(r.niv_rows);
  auto metric = [&](const char* label, auto fn) {
    try {
      s += std::string("\t") + label + "=" + fmt(fn(m));
    } catch (const UndefinedResult&) {
      s += std::string("\t") + label + "=undefined";
    }
  };
  metric("precision", [](const ConfusionMatrix& x) { return precision(x); });
  metric("recall", [](const ConfusionMatrix& x) { return recall(x); });
  metric("phi", [](const ConfusionMatrix& x) { return phi_coefficient(x); });
  return s + "\n";
}

// ---------------------------------------------------------------------------

void cmd_vocab(const Options& o, const Overrides& ov) {
  PipelineConfig c = effective_config(o, ov);
  Corpus corpus = load_corpus(corpus_path(o, c, false), c.corpus_format);
  Vocabulary v = build_vocabulary(corpus, c.training.max_vocab, c.training.min_count);
  std::string text;
  for (const auto& e : v.entries()) text += e.word + "\t" + std::to_string(e.count) + "\n";
  write_output(o.out, text);
}

void cmd_train(const Options& o, const Overrides& ov) {
  PipelineConfig c = effective_config(o, ov);
  const fs::path path = corpus_path(o, c, false);
  Corpus corpus = load_corpus(path, c.corpus_format);
  TrainResult r = train(corpus, c.training);
  save_model(r.model, o.out);
  write_output(o.out + ".json", training_record(c.training, r.stats, path));
  std::cerr << "trained " << training_mode_name(c.training.mode) << " V=" << r.model.size()
            << " D=" << r.model.dim() << " tokens=" << r.stats.tokens
            << " skipped=" << r.stats.steps.skipped << " tokens/s=" << fmt(r.stats.tokens_per_second)
            << "\n";
}

void cmd_neighbors(const Options& o) {
  EmbeddingModel m = load_model(o.model);
  auto q = m.input_row(m.id(o.words.at(0)));
  std::vector<double> query(q.begin(), q.end());
  for (const auto& n : nearest_neighbours(m, query, o.k, {o.words[0]}, ExecutionMode::kParallel))
    std::cout << n.word << '\t' << fmt(n.score) << '\n';
}

void cmd_analogy(const Options& o) {
  EmbeddingModel m = load_model(o.model);
  for (const auto& n : analogy(m, o.words.at(0), o.words.at(1), o.words.at(2), o.k, ExecutionMode::kParallel))
    std::cout << n.word << '\t' << fmt(n.score) << '\n';
}

void cmd_similarity(const Options& o) {
  EmbeddingModel m = load_model(o.model);
  std::cout << fmt(cosine_similarity(m.input_row(m.id(o.words.at(0))), m.input_row(m.id(o.words.at(1)))))
            << '\n';
}

void cmd_targets(const Options& o, const Overrides& ov) {
  PipelineConfig c = effective_config(o, ov);
  Corpus corpus = load_corpus(corpus_path(o, c, true), c.corpus_format);
  std::string text;
  for (const auto& t : resolve_targets(c, corpus)) {
    text += t.sentence_ref.doc_id + "\t" + std::to_string(t.sentence_ref.index) + "\t" +
            t.verb_lemma + "\t" + t.np_head_lemma + "\t" + sentence_text(*corpus.find(t.sentence_ref)) + "\n";
  }
  write_output(o.out, text);
}

void cmd_paraphrase(const Options& o, const Overrides& ov) {
  PipelineConfig c = effective_config(o, ov);
  if (!o.out.empty()) c.output_dir = o.out;
  Corpus corpus = load_corpus(corpus_path(o, c, true), c.corpus_format);
  EmbeddingModel model = load_model(o.model);
  auto targets = resolve_targets(c, corpus);
  auto tables = run_paraphrase(c, model, corpus, targets);
  fs::create_directories(c.output_dir);
  auto names = table_names(tables);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::ostringstream ss;
    write_table(ss, tables[i]);
    const fs::path file = c.output_dir / (names[i] + ".tsv");
    write_output(file.string(), ss.str());
    std::cout << file.string() << '\t' << tables[i].rows.size() << '\n';
  }
}

void cmd_eval(const Options& o, const Overrides& ov) {
  if (!o.counts.empty()) {
    if (o.counts.size() != 4) throw ContractViolation("--counts takes tp tn fp fn");
    ConfusionReport r{{o.counts[0], o.counts[1], o.counts[2], o.counts[3]}, 0};
    std::cout << report_line("counts", r);
    return;
  }
  PipelineConfig c = effective_config(o, ov);
  auto tables = load_eval_tables(o, c);
  const NivPolicy policy = niv_policy(o);
  std::cout << "targets\t" << tables.size() << '\n';
  if (o.by_verb)
    for (const auto& [verb, r] : confusion_by_verb(tables, policy)) std::cout << report_line(verb, r);
  std::cout << report_line("all", confusion(tables, policy));
  if (!o.pr_csv.empty()) {
    std::ostringstream ss;
    write_pr_csv(ss, pr_curve(tables, policy));
    write_output(o.pr_csv, ss.str());
  }
}

void cmd_prcurve(const Options& o, const Overrides& ov) {
  PipelineConfig c = effective_config(o, ov);
  auto tables = load_eval_tables(o, c);
  std::ostringstream ss;
  write_pr_csv(ss, pr_curve(tables, niv_policy(o)));
  write_output(o.out, ss.str());
}

void add_corpus_options(CLI::App* cmd, Options& o, Overrides& ov) {
  cmd->add_option("--corpus", o.corpus, "Corpus file");
  ov.format.add(cmd->add_option("--format", o.format, "Corpus format")
                  ->check(CLI::IsMember({"vertical", "plain"})));
}

void add_vocab_options(CLI::App* cmd, Options& o, Overrides& ov) {
  ov.min_count.add(cmd->add_option("--min-count", o.training.min_count, "Minimum lemma count")
                     ->check(CLI::PositiveNumber));
  ov.max_vocab.add(cmd->add_option("--max-vocab", o.training.max_vocab, "Vocabulary cap")
                     ->check(CLI::PositiveNumber));
}

void add_threshold_options(CLI::App* cmd, Options& o, Overrides& ov) {
  ov.discard.add(cmd->add_option("--discard", o.thresholds.discard, "Discard threshold"));
  ov.viable.add(cmd->add_option("--viable", o.thresholds.viable, "Viability threshold"));
}

void add_table_sources(CLI::App* cmd, Options& o) {
  cmd->add_option("--fixture", o.fixture, "Ranking tables with a gold column for every row");
  cmd->add_option("--tables", o.tables, "Ranking table files or directories");
  cmd->add_option("--gold", o.gold, "Candidate gold labels (doc, index, candidate, +/-)");
  cmd->add_option("--niv", o.niv, "Not-in-vocabulary rows: exclude or true-negative")
      ->check(CLI::IsMember({"exclude", "true-negative"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert event recovery for verbal metonymy with word embeddings."};
  app.require_subcommand(1);
  Options o;
  Overrides ov;
  app.add_option("--config", o.config, "JSON pipeline config (default: $COVERT_CONFIG)");

  auto* vocab = app.add_subcommand("vocab", "Write the vocabulary as word<TAB>count");
  add_corpus_options(vocab, o, ov);
  add_vocab_options(vocab, o, ov);
  vocab->add_option("--out", o.out, "Output file (default stdout)");

  auto* train = app.add_subcommand("train", "Train an embedding model");
  add_corpus_options(train, o, ov);
  add_vocab_options(train, o, ov);
  train->add_option("--mode", o.mode, "Training objective")->check(CLI::IsMember({"cbow", "skipgram"}));
  ov.dim.add(train->add_option("--dim", o.training.dim, "Embedding width")->check(CLI::PositiveNumber));
  ov.window.add(train->add_option("--window", o.training.window, "Context radius")->check(CLI::PositiveNumber));
  ov.epochs.add(train->add_option("--epochs", o.training.epochs, "Passes over the corpus")->check(CLI::PositiveNumber));
  ov.seed.add(train->add_option("--seed", o.training.seed, "RNG seed"));
  ov.threads.add(train->add_option("--threads", o.training.threads, "Worker threads (>1 is nondeterministic)")
                   ->check(CLI::PositiveNumber));
  ov.lr_start.add(train->add_option("--lr-start", o.training.lr_start, "Initial learning rate"));
  ov.lr_end.add(train->add_option("--lr-end", o.training.lr_end, "Final learning rate"));
  train->add_option("--out", o.out, "Model file; a .json run record is written beside it")->required();

  auto* query = app.add_subcommand("query", "Query a trained model");
  query->add_option("--model", o.model, "Model file")->required();
  query->require_subcommand(1);
  auto* neighbors = query->add_subcommand("neighbors", "Nearest neighbours of a word");
  neighbors->add_option("word", o.words, "Query word")->required()->expected(1);
  neighbors->add_option("-k", o.k, "Result count");
  auto* analogy_cmd = query->add_subcommand("analogy", "b - a + c");
  analogy_cmd->add_option("words", o.words, "a b c")->required()->expected(3);
  analogy_cmd->add_option("-k", o.k, "Result count");
  auto* similarity = query->add_subcommand("similarity", "Cosine of two words");
  similarity->add_option("words", o.words, "Two words")->required()->expected(2);

  auto* targets = app.add_subcommand("targets", "List metonymy targets");
  add_corpus_options(targets, o, ov);
  targets->add_option("--gold-targets", o.gold_targets, "Gold target file");
  targets->add_option("--out", o.out, "Output file (default stdout)");

  auto* paraphrase = app.add_subcommand("paraphrase", "Write one ranking table per target");
  add_corpus_options(paraphrase, o, ov);
  paraphrase->add_option("--model", o.model, "Model file")->required();
  paraphrase->add_option("--gold-targets", o.gold_targets, "Gold target file");
  paraphrase->add_option("--out-dir", o.out, "Directory for verb-k.tsv tables");
  add_threshold_options(paraphrase, o, ov);
  ov.inject.add(paraphrase->add_flag("--inject-target-verb", o.inject, "Rank the target verb too"));

  auto* eval = app.add_subcommand("eval", "Confusion counts, precision, recall and phi");
  add_table_sources(eval, o);
  eval->add_option("--pr-csv", o.pr_csv, "Write the precision-recall curve");
  eval->add_option("--counts", o.counts, "Evaluate raw counts: tp tn fp fn")->expected(4);
  eval->add_flag("--by-verb", o.by_verb, "Also report each target verb");

  auto* prcurve = app.add_subcommand("prcurve", "Write the precision-recall curve as CSV");
  add_table_sources(prcurve, o);
  prcurve->add_option("--out", o.out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (vocab->parsed()) cmd_vocab(o, ov);
    else if (train->parsed()) cmd_train(o, ov);
    else if (neighbors->parsed()) cmd_neighbors(o);
    else if (analogy_cmd->parsed()) cmd_analogy(o);
    else if (similarity->parsed()) cmd_similarity(o);
    else if (targets->parsed()) cmd_targets(o, ov);
    else if (paraphrase->parsed()) cmd_paraphrase(o, ov);
    else if (eval->parsed()) cmd_eval(o, ov);
    else if (prcurve->parsed()) cmd_prcurve(o, ov);
  } catch (const NotInVocabulary& e) {
    std::cerr << "covert: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "covert: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
