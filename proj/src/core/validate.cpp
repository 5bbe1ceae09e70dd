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

#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "hiro/core/tokenizer.hpp"
#include "hiro/core/types.hpp"

namespace hiro {

namespace {

class Collector {
 public:
  void add(std::string rule, const NodeId& node) {
    if (seen_.emplace(rule, node).second) report_.violations.push_back({std::move(rule), node});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  std::set<std::pair<std::string, NodeId>> seen_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_index(const HierarchyIndex& index) {
  Collector out;
  const auto nodes = index.nodes();
  const std::size_t dim = index.dim();

  if (dim == 0) out.add("invalid-dim", "");
  if (nodes.empty()) {
    out.add("no-roots", "");
    return out.take();
  }

  std::unordered_map<NodeId, std::size_t> occurrences;
  for (const Node& node : nodes) ++occurrences[node.id];

  const bool check_tokens = has_tokenizer(index.meta().tokenizer_id);
  bool any_root = false;

  for (const Node& node : nodes) {
    if (node.id.empty()) out.add("empty-id", node.id);
    if (occurrences[node.id] > 1) out.add("duplicate-id", node.id);
    if (node.embedding.dim() != dim) {
      out.add("dim-mismatch", node.id);
    } else if (node.embedding.norm() == 0.0) {
      out.add("zero-norm-embedding", node.id);
    }
    if (check_tokens && node.token_count != count_tokens(node.text, index.meta().tokenizer_id)) {
      out.add("token-count-mismatch", node.id);
    }

    if (node.layer == 0) {
      any_root = true;
      if (node.parent) out.add("root-has-parent", node.id);
    } else if (!node.parent) {
      out.add("missing-parent", node.id);
    }

    if (node.parent) {
      const Node* parent = index.find(*node.parent);
      if (parent == nullptr) {
        out.add("unknown-parent", node.id);
      } else {
        bool listed = false;
        for (const NodeId& c : parent->children) listed = listed || c == node.id;
        if (!listed) out.add("parent-link mismatch", node.id);
        if (node.layer != parent->layer + 1) out.add("layer-arithmetic", node.id);
      }
    }

    std::unordered_set<NodeId> listed;
    for (const NodeId& c : node.children) {
      if (!listed.insert(c).second) out.add("duplicate-child", c);
      const Node* child = index.find(c);
      if (child == nullptr) {
        out.add("unknown-child", c);
      } else if (!child->parent || *child->parent != node.id) {
        out.add("parent-link mismatch", c);
      }
    }
  }
  if (!any_root) out.add("no-roots", "");

  // Cycle and reachability over the child graph (first occurrence of each id).
  const std::size_t n = nodes.size();
  enum Colour : unsigned char { white, grey, black };
  std::vector<Colour> colour(n, white);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (position, next child)
  auto dfs = [&](std::size_t start) {
    colour[start] = grey;
    stack.emplace_back(start, 0);
    while (!stack.empty()) {
      auto& [pos, next] = stack.back();
      const auto kids = index.child_positions(pos);
      if (next == kids.size()) {
        colour[pos] = black;
        stack.pop_back();
        continue;
      }
      const std::size_t c = kids[next++];
      if (colour[c] == grey) {
        out.add("cycle detected", nodes[c].id);
      } else if (colour[c] == white) {
        colour[c] = grey;
        stack.emplace_back(c, 0);
      }
    }
  };
  for (std::size_t r : index.root_positions()) {
    if (colour[r] == white) dfs(r);
  }
  std::vector<bool> reachable(n);
  for (std::size_t i = 0; i < n; ++i) reachable[i] = colour[i] != white;
  for (std::size_t i = 0; i < n; ++i) {
    if (colour[i] == white) dfs(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reachable[i] && index.position(nodes[i].id) == i) out.add("unreachable", nodes[i].id);
  }

  return out.take();
}

}  // namespace hiro
