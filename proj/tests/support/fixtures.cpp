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

#include "fixtures.hpp"

#include "hiro/core/tokenizer.hpp"
#include "hiro/rng.hpp"

namespace hiro::testing {

Node make_node(std::string id, std::size_t layer, std::optional<std::string> parent,
               std::vector<std::string> children, std::vector<double> embedding,
               std::string text) {
  Node n;
  if (text.empty()) text = "text of " + id;
  n.id = std::move(id);
  n.layer = layer;
  n.parent = std::move(parent);
  n.children = std::move(children);
  n.text = std::move(text);
  n.token_count = count_tokens(n.text, "whitespace");
  n.embedding = Embedding(std::move(embedding));
  return n;
}

std::vector<Node> fixture_nodes() {
  return {
      make_node("R", 0, std::nullopt, {"A", "B"}, {0.9962, 0.0872}, "the whole story in brief"),
      make_node("A", 1, "R", {"A1", "A2"}, {0.9397, 0.3420}, "first half summary"),
      make_node("B", 1, "R", {}, {0.0, 1.0}, "second half"),
      make_node("A1", 2, "A", {}, {1.0, 0.0}, "opening scene detail"),
      make_node("A2", 2, "A", {}, {0.7071, 0.7071}, "a later scene"),
  };
}

HierarchyIndex fixture_tree() {
  IndexMeta meta;
  meta.dim = 2;
  meta.embedder_id = "fixture";
  return HierarchyIndex(meta, fixture_nodes());
}

Query make_query(std::vector<double> embedding) {
  return Query{"query", Embedding(std::move(embedding))};
}

Query fixture_query() { return make_query({1.0, 0.0}); }

HierarchyIndex random_tree(std::uint64_t seed, const RandomTreeOptions& options) {
  Rng rng(seed);
  const std::size_t dim = options.min_dim + rng.below(options.max_dim - options.min_dim + 1);
  const std::size_t n = 1 + rng.below(options.max_nodes);
  const std::size_t roots = 1 + rng.below(std::min(options.max_roots, n));
  // Skew toward either bushy or deep shapes.
  const bool deep = rng.uniform() < 0.5;

  std::vector<Node> nodes(n);
  auto gaussian = [&] {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal();
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    Node& node = nodes[i];
    node.id = "n" + std::to_string(i);
    node.text = "tok" + std::to_string(i) + (i % 3 == 0 ? " extra words" : "");
    node.token_count = count_tokens(node.text, "whitespace");
    node.embedding = Embedding(gaussian());
    if (i < roots) continue;
    const std::size_t lo = deep ? (i > 4 ? i - 4 : 0) : 0;
    const std::size_t parent = lo + rng.below(i - lo);
    node.parent = nodes[parent].id;
    node.layer = nodes[parent].layer + 1;
    nodes[parent].children.push_back(node.id);
  }
  // Shuffle storage order so nothing depends on it.
  for (std::size_t i = n; i > 1; --i) std::swap(nodes[i - 1], nodes[rng.below(i)]);

  IndexMeta meta;
  meta.dim = dim;
  meta.embedder_id = "random";
  return HierarchyIndex(meta, std::move(nodes));
}

Query random_query(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return make_query(std::move(v));
}

}  // namespace hiro::testing
