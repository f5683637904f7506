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

#include "covert/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "covert/error.hpp"

namespace covert {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where,
                const std::string& source) {
  if (!j.is_object()) throw FormatError(source, 0, where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw FormatError(source, 0, "unknown key '" + key + "' in " + where);
}

TrainingConfig parse_training(const json& j, const std::string& source) {
  check_keys(j, {"mode", "window", "dim", "epochs", "lr_start", "lr_end", "seed", "min_count",
                 "max_vocab", "threads"},
             "training", source);
  TrainingConfig c;
  if (j.contains("mode")) {
    auto m = parse_training_mode(j.at("mode").get<std::string>());
    if (!m) throw FormatError(source, 0, "training.mode must be cbow or skipgram");
    c.mode = *m;
  }
  c.window = j.value("window", c.window);
  c.dim = j.value("dim", c.dim);
  c.epochs = j.value("epochs", c.epochs);
  c.lr_start = j.value("lr_start", c.lr_start);
  c.lr_end = j.value("lr_end", c.lr_end);
  c.seed = j.value("seed", c.seed);
  c.min_count = j.value("min_count", c.min_count);
  c.max_vocab = j.value("max_vocab", c.max_vocab);
  c.threads = j.value("threads", c.threads);
  return c;
}

json training_json(const TrainingConfig& c) {
  return {{"mode", training_mode_name(c.mode)}, {"window", c.window},     {"dim", c.dim},
          {"epochs", c.epochs},                 {"lr_start", c.lr_start}, {"lr_end", c.lr_end},
          {"seed", c.seed},                     {"min_count", c.min_count},
          {"max_vocab", c.max_vocab},           {"threads", c.threads}};
}

}  // namespace

void PipelineConfig::validate() const {
  training.validate();
  thresholds.validate();
  if (verbs.empty()) throw ContractViolation("at least one target verb is required");
  for (const auto& v : verbs) {
    if (v.lemma.empty()) throw ContractViolation("verb lemma must be non-empty");
    if (!(v.eventhood >= 0.0 && v.eventhood <= 1.0))
      throw ContractViolation("eventhood of '" + v.lemma + "' must lie in [0, 1]");
  }
}

PipelineConfig parse_pipeline_config(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(source, 0, e.what());
  }
  PipelineConfig c;
  try {
    check_keys(j, {"train_corpus", "test_corpus", "corpus_format", "training", "verbs",
                   "thresholds", "max_gap", "gold_targets", "gold_labels", "output_dir",
                   "inject_target_verb"},
               "config", source);
    if (j.contains("train_corpus")) c.train_corpus = j.at("train_corpus").get<std::string>();
    if (j.contains("test_corpus")) c.test_corpus = j.at("test_corpus").get<std::string>();
    if (j.contains("corpus_format")) {
      auto f = parse_corpus_format(j.at("corpus_format").get<std::string>());
      if (!f) throw FormatError(source, 0, "corpus_format must be vertical or plain");
      c.corpus_format = *f;
    }
    if (j.contains("training")) c.training = parse_training(j.at("training"), source);
    if (j.contains("verbs")) {
      c.verbs.clear();
      for (const auto& v : j.at("verbs")) {
        check_keys(v, {"lemma", "eventhood", "category"}, "verbs[]", source);
        VerbSpec spec;
        spec.lemma = to_lower(v.at("lemma").get<std::string>());
        spec.eventhood = v.value("eventhood", 0.0);
        if (v.contains("category")) {
          auto cat = parse_verb_category(v.at("category").get<std::string>());
          if (!cat) throw FormatError(source, 0, "verb category must be aspectual or psychological");
          spec.category = *cat;
        }
        c.verbs.push_back(std::move(spec));
      }
    }
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      check_keys(t, {"discard", "viable"}, "thresholds", source);
      c.thresholds.discard = t.value("discard", c.thresholds.discard);
      c.thresholds.viable = t.value("viable", c.thresholds.viable);
    }
    c.max_gap = j.value("max_gap", c.max_gap);
    if (j.contains("gold_targets")) c.gold_targets = j.at("gold_targets").get<std::string>();
    if (j.contains("gold_labels")) c.gold_labels = j.at("gold_labels").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.inject_target_verb = j.value("inject_target_verb", c.inject_target_verb);
  } catch (const json::exception& e) {
    throw FormatError(source, 0, e.what());
  }
  try {
    c.validate();
  } catch (const ContractViolation& e) {
    throw FormatError(source, 0, e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig c = parse_pipeline_config(ss.str(), path.string());
  // Relative paths in a config file are relative to that file.
  const auto base = path.parent_path();
  auto rebase = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  rebase(c.train_corpus);
  rebase(c.test_corpus);
  rebase(c.output_dir);
  if (c.gold_targets) rebase(*c.gold_targets);
  if (c.gold_labels) rebase(*c.gold_labels);
  return c;
}

std::string to_json(const PipelineConfig& c) {
  json verbs = json::array();
  for (const auto& v : c.verbs)
    verbs.push_back({{"lemma", v.lemma}, {"eventhood", v.eventhood}, {"category", verb_category_name(v.category)}});
  json j = {{"train_corpus", c.train_corpus.string()},
            {"test_corpus", c.test_corpus.string()},
            {"corpus_format", c.corpus_format == CorpusFormat::kVertical ? "vertical" : "plain"},
            {"training", training_json(c.training)},
            {"verbs", verbs},
            {"thresholds", {{"discard", c.thresholds.discard}, {"viable", c.thresholds.viable}}},
            {"max_gap", c.max_gap},
            {"output_dir", c.output_dir.string()},
            {"inject_target_verb", c.inject_target_verb}};
  if (c.gold_targets) j["gold_targets"] = c.gold_targets->string();
  if (c.gold_labels) j["gold_labels"] = c.gold_labels->string();
  return j.dump(2) + "\n";
}

std::optional<std::filesystem::path> default_config_path() {
  const char* v = std::getenv(kConfigEnvVar);
  if (!v || !*v) return std::nullopt;
  return std::filesystem::path(v);
}

std::string training_record(const TrainingConfig& config, const TrainStats& stats,
                            const std::filesystem::path& corpus) {
  json j = {{"corpus", corpus.string()},
            {"training", training_json(config)},
            {"tokens", stats.tokens},
            {"predictions", stats.steps.predictions},
            {"node_updates", stats.steps.node_updates},
            {"skipped", stats.steps.skipped}};
  return j.dump(2) + "\n";
}

std::vector<MetonymyTarget> resolve_targets(const PipelineConfig& config, const Corpus& corpus) {
  if (config.gold_targets) return load_gold_targets(*config.gold_targets, corpus);
  return find_targets(corpus, config.verbs, config.max_gap);
}

std::string sentence_text(const Sentence& s) {
  std::string out;
  for (const auto& t : s.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

std::vector<RankingTable> run_paraphrase(const PipelineConfig& config, const EmbeddingModel& model,
                                         const Corpus& corpus,
                                         const std::vector<MetonymyTarget>& targets) {
  config.validate();
  std::set<std::string> excluded;
  for (const auto& v : config.verbs) excluded.insert(v.lemma);
  for (const auto& t : targets) excluded.insert(t.verb_lemma);

  RankOptions options;
  options.thresholds = config.thresholds;
  options.inject_target_verb = config.inject_target_verb;

  std::map<std::string, std::vector<CandidateSentence>> by_head;
  std::vector<RankingTable> tables;
  tables.reserve(targets.size());
  for (const auto& target : targets) {
    auto it = by_head.find(target.np_head_lemma);
    if (it == by_head.end()) {
      auto cands = harvest_candidates(corpus, target.np_head_lemma, excluded, config.max_gap);
      validate_candidates(corpus, cands, config.max_gap);
      it = by_head.emplace(target.np_head_lemma, std::move(cands)).first;
    }
    RankingTable table = rank(model, target, it->second, options);
    if (const Sentence* s = corpus.find(target.sentence_ref)) table.comments.push_back(sentence_text(*s));
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<std::string> table_names(std::span<const RankingTable> tables) {
  std::map<std::string, std::size_t> seen;
  std::vector<std::string> names;
  for (const auto& t : tables) names.push_back(t.target.verb + "-" + std::to_string(++seen[t.target.verb]));
  return names;
}

}  // namespace covert
