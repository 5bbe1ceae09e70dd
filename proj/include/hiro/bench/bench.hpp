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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/evaluation/evaluate.hpp"
#include "hiro/retrieval/retrieval.hpp"
#include "json.hpp"

namespace hiro {

struct BenchSpec {
  /// Leaf counts, strictly increasing.
  std::vector<std::size_t> sizes;
  std::size_t fan_out = 4;
  std::size_t dim = 16;
  std::size_t queries_per_size = 30;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::hiro, Algorithm::hiro_iterative,
                                    Algorithm::tree_traversal, Algorithm::collapsed_tree};
  HiroParams params;
  std::size_t k = 5;

  /// Throws DomainError.
  void validate() const;
};

struct BenchRun {
  Algorithm algorithm = Algorithm::hiro;
  std::size_t n_leaves = 0;
  std::size_t n_nodes = 0;
  std::size_t query = 0;
  std::size_t sim_evals = 0;
  std::size_t nodes_visited = 0;
  std::size_t sort_comparisons = 0;
  std::size_t context_tokens = 0;
  std::size_t emitted = 0;
  std::int64_t wall_time_ns = 0;
};

struct BenchRow {
  Algorithm algorithm = Algorithm::hiro;
  std::size_t n_leaves = 0;
  std::size_t n_nodes = 0;
  /// Node count of the widest layer.
  std::size_t largest_layer = 0;
  double mean_sim_evals = 0.0;
  double mean_sort_comparisons = 0.0;
  double mean_context_tokens = 0.0;
  double mean_wall_time_ns = 0.0;
};

struct BenchReport {
  BenchSpec spec;
  std::vector<BenchRow> rows;
  std::vector<BenchRun> runs;
};

/// Builds a tree over `n_leaves` one-token chunks whose embeddings (leaves
/// and summaries alike) are seeded uniform draws on the unit sphere.
HierarchyIndex generate_random_tree(std::size_t n_leaves, std::size_t fan_out, std::size_t dim,
                                    std::uint64_t seed);

/// Uniform draw on the unit sphere.
Query random_sphere_query(std::size_t dim, std::uint64_t seed);

/// Throws std::logic_error if a HIRO run scores more nodes than the tree has
/// or a collapsed-tree run scores a different number.
BenchReport run_scaling_bench(const BenchSpec& spec);

std::string to_csv(const BenchReport& report);
/// Wall times are omitted when `include_wall_time` is false so that the
/// output is byte-stable across runs.
nlohmann::json to_json(const BenchReport& report, bool include_wall_time = true);

struct ContextRow {
  std::string label;
  Algorithm algorithm = Algorithm::hiro;
  std::size_t n_queries = 0;
  double mean_context_tokens = 0.0;
};

struct ContextReport {
  std::vector<ContextRow> rows;
  /// One record per (config, query), in config-major order.
  std::vector<QueryRecord> records;
  /// Tree traversal >= HIRO >= collapsed tree; empty unless all three ran.
  std::optional<bool> ordering_holds;
};

/// Mean context length per retriever configuration over the same queries.
/// `query_ids` defaults to "q0", "q1", ...
ContextReport context_length_report(const HierarchyIndex& index, std::span<const Query> queries,
                                    std::span<const RetrieverConfig> configs,
                                    std::span<const std::string> query_ids = {});

std::string row_label(Algorithm algorithm);
nlohmann::json to_json(const ContextReport& report, bool include_wall_time = true);
/// Plain-text table with one row per configuration.
std::string to_table(const ContextReport& report);

}  // namespace hiro
