/*
 * Copyright 2026 The hiro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hiro/evaluation/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"

namespace hiro {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_line(std::string_view jsonl, Fn&& fn) {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(pos, end - pos);
    ++lineno;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

json gen_json(const GenScores& s) {
  return {{"rouge_l_f1", s.rouge_l_f1}, {"bleu1", s.bleu1}, {"bleu4", s.bleu4}, {"meteor_lite", s.meteor}};
}

json cls_json(const ClsScores& s) {
  return {{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

GenScores scale(const GenScores& s, double divisor) {
  return {s.rouge_l_f1 / divisor, s.bleu1 / divisor, s.bleu4 / divisor, s.meteor / divisor};
}

}  // namespace

const QaExample* QaDataset::find(std::string_view id) const {
  for (const auto& e : examples) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

QaDataset parse_dataset(std::string_view jsonl) {
  QaDataset ds;
  bool first = true;
  for_each_line(jsonl, [&](const json& j) {
    QaExample ex;
    ex.id = j.at("id").get<std::string>();
    ex.question = j.at("question").get<std::string>();
    const bool mc = j.contains("choices");
    if (first) {
      ds.mode = mc ? EvalMode::multiple_choice : EvalMode::generative;
      first = false;
    } else if (mc != (ds.mode == EvalMode::multiple_choice)) {
      throw ParseError("dataset mixes generative and multiple-choice records");
    }
    if (mc) {
      ex.choices = j.at("choices").get<std::vector<std::string>>();
      ex.answer = j.at("answer").get<int>();
      if (ex.answer < 0 || static_cast<std::size_t>(ex.answer) >= ex.choices.size()) {
        throw ParseError("answer index out of range for '" + ex.id + "'");
      }
    } else {
      ex.references = j.at("references").get<std::vector<std::string>>();
      if (ex.references.empty()) throw ParseError("no references for '" + ex.id + "'");
    }
    ds.examples.push_back(std::move(ex));
  });
  return ds;
}

QaDataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::vector<QuestionRecord> parse_questions(std::string_view jsonl) {
  std::vector<QuestionRecord> out;
  for_each_line(jsonl, [&](const json& j) {
    out.push_back({j.at("id").get<std::string>(), j.at("question").get<std::string>()});
  });
  return out;
}

std::vector<QuestionRecord> load_questions(const std::filesystem::path& path) {
  return parse_questions(read_file(path));
}

json to_json(const RetrieverConfig& config) {
  json p;
  switch (config.algorithm) {
    case Algorithm::hiro:
    case Algorithm::hiro_iterative:
      p["S"] = config.params.selection_threshold;
      p["Delta"] = config.params.delta_threshold;
      p["variant"] = config.algorithm == Algorithm::hiro_iterative ||
                             config.params.variant == HiroVariant::iterative
                         ? "iterative"
                         : "recursive";
      p["retain_parent"] = config.params.retain_parent_on_prune;
      break;
    case Algorithm::tree_traversal:
      p["k"] = config.k;
      break;
    case Algorithm::collapsed_tree:
      p["k"] = config.k;
      p["token_cap"] = config.token_cap ? json(*config.token_cap) : json(nullptr);
      break;
  }
  return p;
}

QueryRecord make_record(std::string query_id, const RetrieverConfig& config,
                        const RetrievalResult& result) {
  QueryRecord r;
  r.query_id = std::move(query_id);
  r.algorithm = std::string(to_string(config.algorithm));
  r.params = to_json(config);
  r.emitted = result.emitted;
  r.context_tokens = result.context_tokens;
  r.sim_evals = result.sim_evals;
  r.sort_comparisons = result.sort_comparisons;
  r.wall_time_ns = result.wall_time.count();
  r.context = result.context_text;
  return r;
}

json to_json(const QueryRecord& r, bool include_context) {
  json j = {{"query_id", r.query_id},
            {"algorithm", r.algorithm},
            {"params", r.params},
            {"emitted", r.emitted},
            {"context_tokens", r.context_tokens},
            {"sim_evals", r.sim_evals},
            {"sort_comparisons", r.sort_comparisons},
            {"wall_time_ns", r.wall_time_ns}};
  if (include_context && r.context) j["context"] = *r.context;
  return j;
}

QueryRecord record_from_json(const json& j) {
  QueryRecord r;
  r.query_id = j.at("query_id").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.params = j.value("params", json::object());
  r.emitted = j.at("emitted").get<std::vector<std::string>>();
  r.context_tokens = j.at("context_tokens").get<std::size_t>();
  r.sim_evals = j.value("sim_evals", std::size_t{0});
  r.sort_comparisons = j.value("sort_comparisons", std::size_t{0});
  r.wall_time_ns = j.value("wall_time_ns", std::int64_t{0});
  if (auto it = j.find("context"); it != j.end() && it->is_string()) r.context = it->get<std::string>();
  return r;
}

std::vector<QueryRecord> parse_results(std::string_view jsonl) {
  std::vector<QueryRecord> out;
  for_each_line(jsonl, [&](const json& j) { out.push_back(record_from_json(j)); });
  return out;
}

std::vector<QueryRecord> load_results(const std::filesystem::path& path) {
  return parse_results(read_file(path));
}

std::string ExtractiveReader::answer(std::string_view, std::string_view context) {
  return std::string(context);
}

int ExtractiveReader::choose(std::string_view, std::string_view context,
                             std::span<const std::string> choices) {
  if (choices.empty()) throw ReaderError("no choices to pick from");
  std::set<std::string> vocab;
  for (auto& t : whitespace_tokens(context)) vocab.insert(lower(std::move(t)));
  int best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto tokens = whitespace_tokens(choices[i]);
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += vocab.count(lower(t));
    const double score = tokens.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(tokens.size());
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

EvaluationReport evaluate_retrieval_run(std::span<const QueryRecord> results,
                                        const QaDataset& dataset, Reader& reader,
                                        const EvalOptions& options) {
  EvaluationReport report;
  report.mode = dataset.mode;
  report.n_queries = results.size();
  report.config = {{"mode", dataset.mode == EvalMode::generative ? "generative" : "multiple_choice"},
                   {"reader", reader.name()},
                   {"tokenizer_id", options.tokenizer_id},
                   {"meteor", "meteor_lite: exact + porter-stem matching, no synonyms"},
                   {"multi_reference", "bleu uses all references; rouge_l_f1 and meteor_lite take the best reference"},
                   {"averaging", "macro"},
                   {"efficiency_adjustment", "mean score / ln(mean context tokens)"}};

  std::vector<int> predictions, gold;
  GenScores sum;
  GenScores adjusted_sum;
  std::size_t adjusted_n = 0;
  double tokens_sum = 0.0;

  for (const QueryRecord& rec : results) {
    const QaExample* ex = dataset.find(rec.query_id);
    if (ex == nullptr) {
      throw DatasetMismatchError("query id '" + rec.query_id + "' is not in the dataset");
    }
    std::string context;
    if (rec.context) {
      context = *rec.context;
    } else if (options.index != nullptr) {
      context = aggregate_context(rec.emitted, *options.index).text;
    } else {
      throw DatasetMismatchError("result for '" + rec.query_id +
                                 "' carries no context and no index was given");
    }

    PerQueryScore pq;
    pq.query_id = rec.query_id;
    pq.context_tokens = rec.context_tokens;
    tokens_sum += static_cast<double>(rec.context_tokens);

    try {
      if (dataset.mode == EvalMode::generative) {
        const std::string answer = reader.answer(ex->question, context);
        GenScores s;
        s.bleu1 = bleu_n(answer, ex->references, 1, options.tokenizer_id);
        s.bleu4 = bleu_n(answer, ex->references, 4, options.tokenizer_id);
        for (const auto& ref : ex->references) {
          s.rouge_l_f1 = std::max(s.rouge_l_f1, rouge_l_f1(answer, ref, options.tokenizer_id));
          s.meteor = std::max(s.meteor, meteor_lite(answer, ref, options.tokenizer_id));
        }
        sum.rouge_l_f1 += s.rouge_l_f1;
        sum.bleu1 += s.bleu1;
        sum.bleu4 += s.bleu4;
        sum.meteor += s.meteor;
        if (rec.context_tokens > 1) {
          const auto a = scale(s, std::log(static_cast<double>(rec.context_tokens)));
          adjusted_sum.rouge_l_f1 += a.rouge_l_f1;
          adjusted_sum.bleu1 += a.bleu1;
          adjusted_sum.bleu4 += a.bleu4;
          adjusted_sum.meteor += a.meteor;
          ++adjusted_n;
        }
        pq.gen = s;
      } else {
        const int choice = reader.choose(ex->question, context, ex->choices);
        if (choice < 0 || static_cast<std::size_t>(choice) >= ex->choices.size()) {
          throw ReaderError("choice index out of range");
        }
        predictions.push_back(choice);
        gold.push_back(ex->answer);
        pq.choice = choice;
      }
    } catch (const ReaderError& e) {
      throw ReaderError("query '" + rec.query_id + "': " + e.what());
    } catch (const EmptyReferenceError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReaderError("query '" + rec.query_id + "': " + e.what());
    }
    report.per_query.push_back(std::move(pq));
  }

  if (results.empty()) return report;

  const double n = static_cast<double>(results.size());
  report.avg_context_tokens = tokens_sum / n;
  const bool can_adjust = *report.avg_context_tokens > 1.0;
  const double log_len = can_adjust ? std::log(*report.avg_context_tokens) : 0.0;

  if (dataset.mode == EvalMode::generative) {
    report.generative = GenScores{sum.rouge_l_f1 / n, sum.bleu1 / n, sum.bleu4 / n, sum.meteor / n};
    if (can_adjust) {
      GenScores adj;
      adj.rouge_l_f1 = efficiency_adjusted(report.generative->rouge_l_f1, *report.avg_context_tokens);
      adj.bleu1 = efficiency_adjusted(report.generative->bleu1, *report.avg_context_tokens);
      adj.bleu4 = efficiency_adjusted(report.generative->bleu4, *report.avg_context_tokens);
      adj.meteor = efficiency_adjusted(report.generative->meteor, *report.avg_context_tokens);
      report.generative_adjusted = adj;
    }
    if (adjusted_n > 0) report.per_query_adjusted = scale(adjusted_sum, static_cast<double>(adjusted_n));
  } else {
    std::set<int> label_set;
    for (const auto& ex : dataset.examples) {
      for (std::size_t i = 0; i < ex.choices.size(); ++i) label_set.insert(static_cast<int>(i));
    }
    const std::vector<int> labels(label_set.begin(), label_set.end());
    report.classification = classification_metrics(predictions, gold, labels);
    if (can_adjust) {
      ClsScores adj = *report.classification;
      adj.accuracy /= log_len;
      adj.precision /= log_len;
      adj.recall /= log_len;
      adj.f1 /= log_len;
      report.classification_adjusted = adj;
    }
  }
  return report;
}

json to_json(const EvaluationReport& report) {
  json j;
  j["n_queries"] = report.n_queries;
  j["avg_context_tokens"] = report.avg_context_tokens ? json(*report.avg_context_tokens) : json(nullptr);
  if (report.mode == EvalMode::generative) {
    j["absolute"] = report.generative ? gen_json(*report.generative) : json(nullptr);
    j["efficiency_adjusted"] =
        report.generative_adjusted ? gen_json(*report.generative_adjusted) : json(nullptr);
    j["efficiency_adjusted_per_query"] =
        report.per_query_adjusted ? gen_json(*report.per_query_adjusted) : json(nullptr);
  } else {
    j["absolute"] = report.classification ? cls_json(*report.classification) : json(nullptr);
    j["efficiency_adjusted"] =
        report.classification_adjusted ? cls_json(*report.classification_adjusted) : json(nullptr);
    j["confusion"] = report.classification ? json(report.classification->confusion) : json(nullptr);
  }
  json per_query = json::array();
  for (const auto& pq : report.per_query) {
    json q = {{"query_id", pq.query_id}, {"context_tokens", pq.context_tokens}};
    if (pq.gen) q["scores"] = gen_json(*pq.gen);
    if (pq.choice) q["choice"] = *pq.choice;
    per_query.push_back(std::move(q));
  }
  j["per_query"] = std::move(per_query);
  j["config"] = report.config;
  return j;
}

}  // namespace hiro
