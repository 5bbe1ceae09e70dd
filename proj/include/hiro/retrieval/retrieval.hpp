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

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiro/core/types.hpp"

namespace hiro {

enum class HiroVariant { recursive, iterative };

struct HiroParams {
  /// Minimum similarity for a layer-0 node to be earmarked (recursive
  /// variant) and for a leaf to be emitted.
  double selection_threshold = 0.5;
  /// Minimum similarity gain of a child over its parent for emission.
  double delta_threshold = 0.05;
  /// Emit a parent whose subtree produced nothing. Recursive variant only.
  bool retain_parent_on_prune = false;
  HiroVariant variant = HiroVariant::recursive;
};

struct Query {
  std::string text;
  Embedding embedding;
};

struct RetrievalResult {
  std::vector<NodeId> emitted;
  std::string context_text;
  std::size_t context_tokens = 0;
  /// Distinct nodes whose similarity to the query was computed.
  std::size_t sim_evals = 0;
  /// Node examinations (a root scan or a child check counts once).
  std::size_t nodes_visited = 0;
  /// Comparator invocations made while ranking.
  std::size_t sort_comparisons = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Earmarks layer-0 nodes scoring above the selection threshold, then runs
/// evaluate_children over them. Output is depth-first in stored child order.
RetrievalResult hiro_query(const Query& query, const HierarchyIndex& index,
                           const HiroParams& params);

/// For every parent and each of its children: emit the child when its gain
/// over the parent exceeds the delta threshold or when it is a leaf above the
/// selection threshold; otherwise descend into it.
std::vector<NodeId> evaluate_children(const Query& query, std::span<const NodeId> parents,
                                      const HierarchyIndex& index, const HiroParams& params);

/// Worklist form. Layer-0 nodes are scored against a parent score of 0, so a
/// root can be emitted outright; the recursive form never emits roots.
RetrievalResult hiro_query_iterative(const Query& query, const HierarchyIndex& index,
                                     const HiroParams& params);

/// Top-k per layer, descending only through the children of the nodes
/// selected in the layer above.
RetrievalResult tree_traversal_query(const Query& query, const HierarchyIndex& index,
                                     std::size_t k);

/// Global top-k over every node. With a token cap, nodes are taken greedily in
/// rank order while the running token total stays within the cap.
RetrievalResult collapsed_tree_query(const Query& query, const HierarchyIndex& index,
                                     std::size_t k,
                                     std::optional<std::size_t> token_cap = std::nullopt);

struct Context {
  std::string text;
  std::size_t tokens = 0;
};

/// Node texts joined by a blank line; tokens are summed per node.
Context aggregate_context(std::span<const NodeId> emitted, const HierarchyIndex& index);

enum class Algorithm { hiro, hiro_iterative, tree_traversal, collapsed_tree };

/// CLI spelling: hiro, hiro-iterative, tree-traversal, collapsed-tree.
std::string_view to_string(Algorithm algorithm);
/// Report spelling: hiro_recursive, hiro_iterative, tree_traversal, collapsed_tree.
std::string_view bench_name(Algorithm algorithm);
/// Accepts either spelling. Throws ParseError.
Algorithm parse_algorithm(std::string_view name);

struct RetrieverConfig {
  Algorithm algorithm = Algorithm::hiro;
  HiroParams params;
  std::size_t k = 5;
  std::optional<std::size_t> token_cap;
};

/// Dispatches to the algorithm named by `config`.
RetrievalResult run_query(const Query& query, const HierarchyIndex& index,
                          const RetrieverConfig& config);

}  // namespace hiro
