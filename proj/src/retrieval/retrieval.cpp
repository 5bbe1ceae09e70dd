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

#include "hiro/retrieval/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hiro/core/similarity.hpp"
#include "hiro/errors.hpp"

namespace hiro {

namespace {

using Clock = std::chrono::steady_clock;

void check_query(const Query& query, const HierarchyIndex& index) {
  if (query.embedding.dim() != index.dim()) {
    throw DimensionError("query dim " + std::to_string(query.embedding.dim()) +
                         " does not match index dim " + std::to_string(index.dim()));
  }
  if (index.metric() == SimilarityMetric::cosine && query.embedding.norm() == 0.0) {
    throw DegenerateVectorError("query embedding has zero norm");
  }
  index.require_valid();
}

// Per-query memo of node scores; each node is scored at most once.
class Scorer {
 public:
  Scorer(const Query& query, const HierarchyIndex& index)
      : query_(query),
        index_(index),
        scores_(index.size(), std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(std::size_t pos) {
    double& s = scores_[pos];
    if (std::isnan(s)) {
      s = similarity(index_.metric(), query_.embedding.values(),
                     index_.node_at(pos).embedding.values());
      ++evals_;
    }
    return s;
  }

  std::size_t evals() const { return evals_; }

 private:
  const Query& query_;
  const HierarchyIndex& index_;
  std::vector<double> scores_;
  std::size_t evals_ = 0;
};

// Descending score, ties by ascending id.
struct RankOrder {
  const HierarchyIndex* index;
  const std::vector<double>* score;
  std::size_t* comparisons;

  bool operator()(std::size_t a, std::size_t b) const {
    ++*comparisons;
    if ((*score)[a] != (*score)[b]) return (*score)[a] > (*score)[b];
    return index->node_at(a).id < index->node_at(b).id;
  }
};

class ChildEvaluator {
 public:
  ChildEvaluator(const HierarchyIndex& index, const HiroParams& params, Scorer& score)
      : index_(index), params_(params), score_(score) {}

  void evaluate(std::size_t parent, std::vector<std::size_t>& out) {
    const std::size_t before = out.size();
    const double parent_score = score_(parent);
    const auto children = index_.child_positions(parent);
    for (std::size_t child : children) {
      ++visited_;
      const double s = score_(child);
      const bool leaf = index_.node_at(child).is_leaf();
      if (s - parent_score > params_.delta_threshold ||
          (leaf && s > params_.selection_threshold)) {
        out.push_back(child);
      } else {
        evaluate(child, out);
      }
    }
    if (params_.retain_parent_on_prune && !children.empty() && out.size() == before) {
      out.push_back(parent);
    }
  }

  std::size_t visited() const { return visited_; }

 private:
  const HierarchyIndex& index_;
  const HiroParams& params_;
  Scorer& score_;
  std::size_t visited_ = 0;
};

RetrievalResult finish(const HierarchyIndex& index, const std::vector<std::size_t>& emitted,
                       Clock::time_point start) {
  RetrievalResult r;
  r.emitted.reserve(emitted.size());
  for (std::size_t p : emitted) r.emitted.push_back(index.node_at(p).id);
  auto ctx = aggregate_context(r.emitted, index);
  r.context_text = std::move(ctx.text);
  r.context_tokens = ctx.tokens;
  r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return r;
}

}  // namespace

RetrievalResult hiro_query(const Query& query, const HierarchyIndex& index,
                           const HiroParams& params) {
  const auto start = Clock::now();
  check_query(query, index);
  Scorer score(query, index);

  std::vector<std::size_t> earmarked;
  std::size_t visited = 0;
  for (std::size_t root : index.root_positions()) {
    ++visited;
    if (score(root) > params.selection_threshold) earmarked.push_back(root);
  }

  ChildEvaluator evaluator(index, params, score);
  std::vector<std::size_t> emitted;
  for (std::size_t p : earmarked) evaluator.evaluate(p, emitted);

  auto r = finish(index, emitted, start);
  r.sim_evals = score.evals();
  r.nodes_visited = visited + evaluator.visited();
  return r;
}

std::vector<NodeId> evaluate_children(const Query& query, std::span<const NodeId> parents,
                                      const HierarchyIndex& index, const HiroParams& params) {
  check_query(query, index);
  std::vector<std::size_t> positions;
  positions.reserve(parents.size());
  for (const NodeId& id : parents) {
    const std::size_t p = index.position(id);
    if (p == HierarchyIndex::npos) throw InvalidIndexError("unknown node id '" + id + "'");
    positions.push_back(p);
  }
  Scorer score(query, index);
  ChildEvaluator evaluator(index, params, score);
  std::vector<std::size_t> emitted;
  for (std::size_t p : positions) evaluator.evaluate(p, emitted);

  std::vector<NodeId> out;
  out.reserve(emitted.size());
  for (std::size_t p : emitted) out.push_back(index.node_at(p).id);
  return out;
}

RetrievalResult hiro_query_iterative(const Query& query, const HierarchyIndex& index,
                                     const HiroParams& params) {
  const auto start = Clock::now();
  check_query(query, index);
  Scorer score(query, index);

  // LIFO with reversed pushes, so pops follow depth-first stored order.
  const auto roots = index.root_positions();
  std::vector<std::size_t> worklist(roots.rbegin(), roots.rend());
  std::vector<std::size_t> emitted;
  std::size_t visited = 0;
  while (!worklist.empty()) {
    const std::size_t node = worklist.back();
    worklist.pop_back();
    ++visited;
    const std::size_t parent = index.parent_position(node);
    const double parent_score = parent == HierarchyIndex::npos ? 0.0 : score(parent);
    const double s = score(node);
    const bool leaf = index.node_at(node).is_leaf();
    if ((s > params.selection_threshold && leaf) || s - parent_score > params.delta_threshold) {
      emitted.push_back(node);
    } else {
      const auto children = index.child_positions(node);
      worklist.insert(worklist.end(), children.rbegin(), children.rend());
    }
  }

  auto r = finish(index, emitted, start);
  r.sim_evals = score.evals();
  r.nodes_visited = visited;
  return r;
}

RetrievalResult tree_traversal_query(const Query& query, const HierarchyIndex& index,
                                     std::size_t k) {
  const auto start = Clock::now();
  if (k < 1) throw DomainError("k must be >= 1");
  check_query(query, index);

  std::vector<double> scores(index.size());
  std::size_t comparisons = 0;
  std::size_t visited = 0;
  std::vector<std::size_t> emitted;
  auto roots = index.root_positions();
  std::vector<std::size_t> candidates(roots.begin(), roots.end());
  while (!candidates.empty()) {
    for (std::size_t c : candidates) {
      ++visited;
      scores[c] = similarity(index.metric(), query.embedding.values(),
                             index.node_at(c).embedding.values());
    }
    std::sort(candidates.begin(), candidates.end(), RankOrder{&index, &scores, &comparisons});
    candidates.resize(std::min(k, candidates.size()));
    emitted.insert(emitted.end(), candidates.begin(), candidates.end());

    std::vector<std::size_t> next;
    for (std::size_t p : candidates) {
      const auto kids = index.child_positions(p);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    candidates = std::move(next);
  }

  auto r = finish(index, emitted, start);
  r.sim_evals = visited;
  r.nodes_visited = visited;
  r.sort_comparisons = comparisons;
  return r;
}

RetrievalResult collapsed_tree_query(const Query& query, const HierarchyIndex& index,
                                     std::size_t k, std::optional<std::size_t> token_cap) {
  const auto start = Clock::now();
  if (k < 1) throw DomainError("k must be >= 1");
  check_query(query, index);

  const std::size_t n = index.size();
  std::vector<double> scores(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
    scores[i] = similarity(index.metric(), query.embedding.values(),
                           index.node_at(i).embedding.values());
  }
  std::size_t comparisons = 0;
  std::sort(order.begin(), order.end(), RankOrder{&index, &scores, &comparisons});

  std::vector<std::size_t> emitted;
  if (!token_cap) {
    order.resize(std::min(k, n));
    emitted = std::move(order);
  } else {
    std::size_t used = 0;
    for (std::size_t p : order) {
      if (emitted.size() == k) break;
      const std::size_t tokens = index.node_at(p).token_count;
      if (used + tokens <= *token_cap) {
        used += tokens;
        emitted.push_back(p);
      }
    }
  }

  auto r = finish(index, emitted, start);
  r.sim_evals = n;
  r.nodes_visited = n;
  r.sort_comparisons = comparisons;
  return r;
}

Context aggregate_context(std::span<const NodeId> emitted, const HierarchyIndex& index) {
  Context ctx;
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    const Node& node = index.at(emitted[i]);
    if (i > 0) ctx.text += "\n\n";
    ctx.text += node.text;
    ctx.tokens += node.token_count;
  }
  return ctx;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::hiro:
      return "hiro";
    case Algorithm::hiro_iterative:
      return "hiro-iterative";
    case Algorithm::tree_traversal:
      return "tree-traversal";
    case Algorithm::collapsed_tree:
      return "collapsed-tree";
  }
  return "hiro";
}

std::string_view bench_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::hiro:
      return "hiro_recursive";
    case Algorithm::hiro_iterative:
      return "hiro_iterative";
    case Algorithm::tree_traversal:
      return "tree_traversal";
    case Algorithm::collapsed_tree:
      return "collapsed_tree";
  }
  return "hiro_recursive";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "hiro" || name == "hiro_recursive") return Algorithm::hiro;
  if (name == "hiro-iterative" || name == "hiro_iterative") return Algorithm::hiro_iterative;
  if (name == "tree-traversal" || name == "tree_traversal") return Algorithm::tree_traversal;
  if (name == "collapsed-tree" || name == "collapsed_tree") return Algorithm::collapsed_tree;
  throw ParseError("unknown algorithm '" + std::string(name) + "'");
}

RetrievalResult run_query(const Query& query, const HierarchyIndex& index,
                          const RetrieverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::hiro:
      return config.params.variant == HiroVariant::iterative
                 ? hiro_query_iterative(query, index, config.params)
                 : hiro_query(query, index, config.params);
    case Algorithm::hiro_iterative:
      return hiro_query_iterative(query, index, config.params);
    case Algorithm::tree_traversal:
      return tree_traversal_query(query, index, config.k);
    case Algorithm::collapsed_tree:
      return collapsed_tree_query(query, index, config.k, config.token_cap);
  }
  return hiro_query(query, index, config.params);
}

}  // namespace hiro
