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

#include "hiro/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hiro/errors.hpp"

namespace hiro {

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DimensionError("embedding must have dim >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DegenerateVectorError("embedding has a non-finite value");
  }
}

double Embedding::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

std::string_view to_string(SimilarityMetric metric) {
  switch (metric) {
    case SimilarityMetric::cosine:
      return "cosine";
    case SimilarityMetric::neg_euclidean:
      return "neg_euclidean";
    case SimilarityMetric::neg_manhattan:
      return "neg_manhattan";
  }
  return "cosine";
}

SimilarityMetric parse_metric(std::string_view name) {
  if (name == "cosine") return SimilarityMetric::cosine;
  if (name == "neg_euclidean") return SimilarityMetric::neg_euclidean;
  if (name == "neg_manhattan") return SimilarityMetric::neg_manhattan;
  throw ParseError("unknown similarity metric '" + std::string(name) + "'");
}

std::string Violation::message() const {
  if (node.empty()) return rule;
  return rule + " at " + node;
}

bool ValidationReport::has(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

HierarchyIndex::HierarchyIndex(IndexMeta meta, std::vector<Node> nodes)
    : meta_(std::move(meta)), nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  by_id_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) by_id_.try_emplace(nodes_[i].id, i);

  parent_pos_.assign(n, npos);
  child_pos_.resize(n);
  std::size_t max_layer = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    max_layer = std::max(max_layer, node.layer);
    if (node.parent) parent_pos_[i] = position(*node.parent);
    child_pos_[i].reserve(node.children.size());
    for (const NodeId& c : node.children) {
      if (auto p = position(c); p != npos) child_pos_[i].push_back(p);
    }
  }
  if (n == 0) {
    validation_ = validate_index(*this);
    return;
  }

  std::vector<bool> placed(n, false);
  std::vector<std::vector<std::size_t>> layer_pos(max_layer + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].layer == 0) layer_pos[0].push_back(i);
  }
  std::sort(layer_pos[0].begin(), layer_pos[0].end(), [&](std::size_t a, std::size_t b) {
    if (nodes_[a].id != nodes_[b].id) return nodes_[a].id < nodes_[b].id;
    return a < b;
  });
  for (std::size_t p : layer_pos[0]) placed[p] = true;

  for (std::size_t l = 1; l <= max_layer; ++l) {
    for (std::size_t p : layer_pos[l - 1]) {
      for (std::size_t c : child_pos_[p]) {
        if (!placed[c] && nodes_[c].layer == l) {
          placed[c] = true;
          layer_pos[l].push_back(c);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i] && nodes_[i].layer == l) {
        placed[i] = true;
        layer_pos[l].push_back(i);
      }
    }
  }

  root_pos_ = layer_pos[0];
  layers_.resize(layer_pos.size());
  for (std::size_t l = 0; l < layer_pos.size(); ++l) {
    layers_[l].reserve(layer_pos[l].size());
    for (std::size_t p : layer_pos[l]) layers_[l].push_back(nodes_[p].id);
  }

  validation_ = validate_index(*this);
}

const Node* HierarchyIndex::find(const NodeId& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &nodes_[it->second];
}

const Node& HierarchyIndex::at(const NodeId& id) const {
  const Node* node = find(id);
  if (node == nullptr) throw InvalidIndexError("unknown node id '" + id + "'");
  return *node;
}

std::size_t HierarchyIndex::position(const NodeId& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? npos : it->second;
}

void HierarchyIndex::require_valid() const {
  if (validation_.ok()) return;
  std::ostringstream msg;
  msg << "invalid index: ";
  const std::size_t shown = std::min<std::size_t>(validation_.violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) msg << "; ";
    msg << validation_.violations[i].message();
  }
  if (validation_.violations.size() > shown) {
    msg << "; (+" << validation_.violations.size() - shown << " more)";
  }
  throw InvalidIndexError(msg.str());
}

bool operator==(const HierarchyIndex& a, const HierarchyIndex& b) {
  if (a.meta_ != b.meta_ || a.nodes_.size() != b.nodes_.size()) return false;
  if (a.by_id_.size() != b.by_id_.size()) return false;
  for (const Node& node : a.nodes_) {
    const Node* other = b.find(node.id);
    if (other == nullptr || !(*other == *a.find(node.id))) return false;
  }
  return a.layers_ == b.layers_;
}

}  // namespace hiro
