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

#include "covert/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "covert/error.hpp"

namespace covert {

namespace {

bool predicted_positive(const ScoredRow& r) { return r.label == Label::kViable; }

std::string row_name(const RankingTable& t, std::size_t i) {
  return "row " + std::to_string(i + 1) + " ('" + t.rows[i].candidate + "') of target " +
         t.target.doc_id + "/" + std::to_string(t.target.sentence_index) + " " + t.target.verb +
         " " + t.target.np_head;
}

void tally(const RankingTable& t, NivPolicy policy, ConfusionReport& report) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const ScoredRow& r = t.rows[i];
    if (!r.scored()) {
      ++report.niv_rows;
      if (policy == NivPolicy::kTrueNegative) ++report.matrix.tn;
      continue;
    }
    if (!r.gold) throw ContractViolation("missing gold label for " + row_name(t, i));
    const bool pred = predicted_positive(r);
    if (pred && *r.gold) ++report.matrix.tp;
    else if (pred) ++report.matrix.fp;
    else if (*r.gold) ++report.matrix.fn;
    else ++report.matrix.tn;
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

std::optional<NivPolicy> parse_niv_policy(std::string_view name) {
  if (name == "exclude") return NivPolicy::kExclude;
  if (name == "true-negative") return NivPolicy::kTrueNegative;
  return std::nullopt;
}

std::string_view niv_policy_name(NivPolicy p) {
  return p == NivPolicy::kExclude ? "exclude" : "true-negative";
}

ConfusionReport confusion(std::span<const RankingTable> tables, NivPolicy policy) {
  ConfusionReport report;
  for (const auto& t : tables) tally(t, policy, report);
  return report;
}

std::map<std::string, ConfusionReport> confusion_by_verb(std::span<const RankingTable> tables,
                                                         NivPolicy policy) {
  std::map<std::string, ConfusionReport> out;
  for (const auto& t : tables) tally(t, policy, out[t.target.verb]);
  return out;
}

double precision(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fp == 0) throw UndefinedResult("precision: no retrieved items");
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

double recall(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) throw UndefinedResult("recall: no relevant items");
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double phi_coefficient(const ConfusionMatrix& cm) {
  const double tp = static_cast<double>(cm.tp), tn = static_cast<double>(cm.tn);
  const double fp = static_cast<double>(cm.fp), fn = static_cast<double>(cm.fn);
  const double m = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (m == 0.0) throw UndefinedResult("phi: a marginal sum is zero");
  return std::clamp((tp * tn - fp * fn) / std::sqrt(m), -1.0, 1.0);
}

std::vector<PRPoint> pr_curve(std::span<const RankingTable> tables, NivPolicy policy) {
  struct Item {
    double key;
    bool scored;
    bool gold;
  };
  std::vector<Item> items;
  for (const auto& t : tables) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const ScoredRow& r = t.rows[i];
      if (!r.scored() && policy == NivPolicy::kExclude) continue;
      if (!r.gold) throw ContractViolation("missing gold label for " + row_name(t, i));
      items.push_back({r.confidence.value_or(0.0), r.scored(), *r.gold});
    }
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.scored != b.scored) return a.scored;
    return a.key > b.key;
  });
  const auto positives = static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [](const Item& it) { return it.gold; }));
  if (positives == 0) throw UndefinedResult("pr_curve: no gold-positive rows");

  std::vector<PRPoint> out;
  out.reserve(items.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].gold) ++hits;
    out.push_back({k + 1, static_cast<double>(hits) / static_cast<double>(k + 1),
                   static_cast<double>(hits) / static_cast<double>(positives)});
  }
  return out;
}

void write_pr_csv(std::ostream& out, std::span<const PRPoint> points) {
  out << "rank,precision,recall\n";
  for (const auto& p : points)
    out << p.rank << ',' << format_double(p.precision) << ',' << format_double(p.recall) << '\n';
}

std::vector<RankingTable> read_fixture(std::istream& in, const std::string& source_name) {
  // Rows carry no line numbers after parsing, so count them on a second view.
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream first(text);
  auto tables = read_tables(first, source_name);

  std::istringstream second(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(second, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (std::count(line.begin(), line.end(), '\t') != 3)
      throw FormatError(source_name, line_no, "fixture row lacks a gold label column");
  }
  return tables;
}

std::vector<RankingTable> load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixture '" + path.string() + "'");
  return read_fixture(in, path.string());
}

GoldLabels read_gold_labels(std::istream& in, const std::string& source_name) {
  GoldLabels gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (f.size() != 4) throw FormatError(source_name, line_no, "expected 4 tab-separated fields");
    std::size_t idx = 0;
    auto res = std::from_chars(f[1].data(), f[1].data() + f[1].size(), idx);
    if (res.ec != std::errc() || res.ptr != f[1].data() + f[1].size())
      throw FormatError(source_name, line_no, "bad sentence index '" + f[1] + "'");
    if (f[3] != "+" && f[3] != "-") throw FormatError(source_name, line_no, "gold label must be + or -");
    gold.labels[{SentenceRef{f[0], idx}, f[2]}] = f[3] == "+";
  }
  return gold;
}

GoldLabels load_gold_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gold labels '" + path.string() + "'");
  return read_gold_labels(in, path.string());
}

std::size_t apply_gold(std::span<RankingTable> tables, const GoldLabels& gold) {
  std::size_t updated = 0;
  for (auto& t : tables) {
    SentenceRef ref{t.target.doc_id, t.target.sentence_index};
    for (auto& r : t.rows) {
      auto it = gold.labels.find({ref, r.candidate});
      if (it == gold.labels.end()) continue;
      r.gold = it->second;
      ++updated;
    }
  }
  return updated;
}

}  // namespace covert
