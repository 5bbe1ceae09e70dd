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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/evaluation/metrics.hpp"
#include "hiro/retrieval/retrieval.hpp"
#include "json.hpp"

namespace hiro {

enum class EvalMode { generative, multiple_choice };

struct QaExample {
  std::string id;
  std::string question;
  std::vector<std::string> references;  // generative
  std::vector<std::string> choices;     // multiple choice
  int answer = -1;
};

struct QaDataset {
  EvalMode mode = EvalMode::generative;
  std::vector<QaExample> examples;

  const QaExample* find(std::string_view id) const;
};

/// JSONL; the mode is taken from the first record ("choices" present means
/// multiple choice). Throws ParseError on malformed or mixed records.
QaDataset load_dataset(const std::filesystem::path& path);
QaDataset parse_dataset(std::string_view jsonl);

struct QuestionRecord {
  std::string id;
  std::string question;
};

/// Query batch JSONL: {"id", "question"} per line; other keys are ignored, so
/// dataset files are accepted too.
std::vector<QuestionRecord> parse_questions(std::string_view jsonl);
std::vector<QuestionRecord> load_questions(const std::filesystem::path& path);

/// One line of the query results stream.
struct QueryRecord {
  std::string query_id;
  std::string algorithm;
  nlohmann::json params = nlohmann::json::object();
  std::vector<NodeId> emitted;
  std::size_t context_tokens = 0;
  std::size_t sim_evals = 0;
  std::size_t sort_comparisons = 0;
  std::int64_t wall_time_ns = 0;
  /// Not part of the stable line schema; written as "context" when known.
  std::optional<std::string> context;
};

QueryRecord make_record(std::string query_id, const RetrieverConfig& config,
                        const RetrievalResult& result);
nlohmann::json to_json(const RetrieverConfig& config);
nlohmann::json to_json(const QueryRecord& record, bool include_context = true);
QueryRecord record_from_json(const nlohmann::json& j);
std::vector<QueryRecord> parse_results(std::string_view jsonl);
std::vector<QueryRecord> load_results(const std::filesystem::path& path);

/// Answer-producing model fed with retrieved context.
class Reader {
 public:
  virtual ~Reader() = default;
  virtual std::string name() const = 0;
  virtual std::string answer(std::string_view question, std::string_view context) = 0;
  /// Index into `choices`.
  virtual int choose(std::string_view question, std::string_view context,
                     std::span<const std::string> choices) = 0;
};

/// Answers with the context verbatim; picks the choice whose tokens overlap
/// the context most (ties to the lowest index).
class ExtractiveReader final : public Reader {
 public:
  std::string name() const override { return "extractive"; }
  std::string answer(std::string_view question, std::string_view context) override;
  int choose(std::string_view question, std::string_view context,
             std::span<const std::string> choices) override;
};

struct PerQueryScore {
  std::string query_id;
  std::size_t context_tokens = 0;
  std::optional<GenScores> gen;
  std::optional<int> choice;
};

struct EvaluationReport {
  EvalMode mode = EvalMode::generative;
  std::size_t n_queries = 0;
  std::optional<GenScores> generative;      // corpus means
  std::optional<ClsScores> classification;
  std::optional<double> avg_context_tokens;
  /// Metric means divided by ln(avg_context_tokens); empty when there are no
  /// queries or the average context is at most one token.
  std::optional<GenScores> generative_adjusted;
  std::optional<ClsScores> classification_adjusted;
  /// Mean of per-query adjusted scores over queries with context > 1 token.
  std::optional<GenScores> per_query_adjusted;
  std::vector<PerQueryScore> per_query;
  nlohmann::json config = nlohmann::json::object();
};

struct EvalOptions {
  std::string tokenizer_id = "whitespace";
  /// Rebuilds contexts for records that do not carry one.
  const HierarchyIndex* index = nullptr;
};

/// Scores every result against the dataset. Throws DatasetMismatchError for
/// unknown query ids and ReaderError (naming the query) if the reader fails.
EvaluationReport evaluate_retrieval_run(std::span<const QueryRecord> results,
                                        const QaDataset& dataset, Reader& reader,
                                        const EvalOptions& options = {});

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace hiro
