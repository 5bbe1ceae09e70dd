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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace hiro::testing {

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return dot / std::sqrt(aa * bb);
}

namespace {

double sim(const std::vector<double>& q, const HierarchyIndex& tree, const std::string& id) {
  const auto v = tree.at(id).embedding.values();
  return naive_cosine(q, std::vector<double>(v.begin(), v.end()));
}

}  // namespace

std::vector<std::string> naive_evaluate_children(const std::vector<double>& q,
                                                 const std::vector<std::string>& nodes,
                                                 const HierarchyIndex& tree, double S,
                                                 double delta) {
  std::vector<std::string> local_context;
  for (const auto& parent_node : nodes) {
    const double parent_similarity = sim(q, tree, parent_node);
    for (const auto& node : tree.at(parent_node).children) {
      const double score = sim(q, tree, node);
      const double d = score - parent_similarity;
      if (d > delta || (tree.at(node).is_leaf() && score > S)) {
        local_context.push_back(node);
      } else {
        auto sub = naive_evaluate_children(q, {node}, tree, S, delta);
        local_context.insert(local_context.end(), sub.begin(), sub.end());
      }
    }
  }
  return local_context;
}

std::vector<std::string> naive_hiro_recursive(const std::vector<double>& q,
                                              const HierarchyIndex& tree, double S,
                                              double delta) {
  std::vector<std::string> earmarked;
  for (const auto& node : tree.layers()[0]) {
    if (sim(q, tree, node) > S) earmarked.push_back(node);
  }
  return naive_evaluate_children(q, earmarked, tree, S, delta);
}

std::vector<std::string> naive_hiro_worklist(const std::vector<double>& q,
                                             const HierarchyIndex& tree, double S, double delta,
                                             bool stored_order) {
  std::vector<std::string> context;
  std::vector<std::string> nodes_to_evaluate = tree.layers()[0];
  if (stored_order) std::reverse(nodes_to_evaluate.begin(), nodes_to_evaluate.end());
  while (!nodes_to_evaluate.empty()) {
    const std::string node = nodes_to_evaluate.back();
    nodes_to_evaluate.pop_back();
    const Node& n = tree.at(node);
    const double parent_score = n.parent ? sim(q, tree, *n.parent) : 0.0;
    const double score = sim(q, tree, node);
    const double d = score - parent_score;
    if ((score > S && n.is_leaf()) || d > delta) {
      context.push_back(node);
    } else if (stored_order) {
      nodes_to_evaluate.insert(nodes_to_evaluate.end(), n.children.rbegin(), n.children.rend());
    } else {
      nodes_to_evaluate.insert(nodes_to_evaluate.end(), n.children.begin(), n.children.end());
    }
  }
  return context;
}

}  // namespace hiro::testing
