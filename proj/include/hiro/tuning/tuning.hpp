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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/embedding/embedder.hpp"
#include "hiro/evaluation/evaluate.hpp"
#include "hiro/evaluation/metrics.hpp"
#include "hiro/retrieval/retrieval.hpp"
#include "json.hpp"

namespace hiro {

struct ParamBounds {
  double s_min = 0.0;
  double s_max = 1.0;
  double d_min = -0.1;
  double d_max = 0.5;

  /// Throws DomainError for non-finite or inverted bounds.
  void validate() const;
  bool contains(double s, double delta) const;
};

/// Parses "S_MIN,S_MAX,D_MIN,D_MAX".
ParamBounds parse_bounds(std::string_view text);

struct TuningPoint {
  double s = 0.0;
  double delta = 0.0;

  bool operator==(const TuningPoint&) const = default;
};

struct TrialRecord {
  TuningPoint params;
  double objective = 0.0;
  std::map<std::string, double> raw_metrics;
  /// Zero-based evaluation order.
  std::size_t iteration = 0;
  std::int64_t wall_time_ns = 0;
};

struct TuningResult {
  TuningPoint best;
  double best_value = 0.0;
  std::vector<TrialRecord> history;
  std::uint64_t seed = 0;
  ParamBounds bounds;
};

/// Min-max normalization of one raw metric across the history; a constant
/// series maps to 0.5.
std::vector<double> normalize_scores(std::span<const TrialRecord> history, std::string_view metric);

/// Sum of the four (already normalized) generative metrics.
double narrativeqa_objective(const GenScores& normalized);
/// Harmonic mean of precision and recall.
double quality_objective(const ClsScores& scores);

using Objective = std::function<double(const TuningPoint&)>;

/// Evaluates raw metrics at a point; the tuner rescores the whole history
/// through `combine` after every trial.
struct MetricObjective {
  std::function<std::map<std::string, double>(const TuningPoint&)> evaluate;
  std::function<std::vector<double>(std::span<const TrialRecord>)> combine;
};

TuningResult bayes_optimize(const Objective& objective, const ParamBounds& bounds,
                            std::size_t budget, std::uint64_t seed);
TuningResult bayes_optimize(const MetricObjective& objective, const ParamBounds& bounds,
                            std::size_t budget, std::uint64_t seed);

TuningResult random_search_baseline(const Objective& objective, const ParamBounds& bounds,
                                    std::size_t budget, std::uint64_t seed);
TuningResult random_search_baseline(const MetricObjective& objective, const ParamBounds& bounds,
                                    std::size_t budget, std::uint64_t seed);

/// Scores HIRO on every dataset question at each trial point. Generative
/// datasets combine normalized ROUGE-L, BLEU-1, BLEU-4 and METEOR; multiple
/// choice datasets use the F1 of macro precision and recall.
MetricObjective make_retrieval_objective(const HierarchyIndex& index, const QaDataset& dataset,
                                         Embedder& embedder, Reader& reader,
                                         HiroVariant variant = HiroVariant::recursive,
                                         std::string tokenizer_id = "whitespace");

nlohmann::json to_json(const ParamBounds& bounds);
nlohmann::json to_json(const TrialRecord& record);
nlohmann::json to_json(const TuningResult& result);

}  // namespace hiro
