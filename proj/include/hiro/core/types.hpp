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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hiro {

/// Fixed-dimension real vector. Construction rejects empty and non-finite
/// input; a zero vector is representable but is refused once attached to a
/// node (see validate_index).
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double norm() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
};

using NodeId = std::string;

struct Node {
  NodeId id;
  std::size_t layer = 0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::string text;
  Embedding embedding;
  std::size_t token_count = 0;

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const Node&, const Node&) = default;
};

/// Higher is always more similar; distance kinds are negated.
enum class SimilarityMetric { cosine, neg_euclidean, neg_manhattan };

std::string_view to_string(SimilarityMetric metric);
/// Throws ParseError on an unknown name.
SimilarityMetric parse_metric(std::string_view name);

struct IndexMeta {
  std::size_t dim = 0;
  std::string embedder_id;
  std::string tokenizer_id = "whitespace";
  SimilarityMetric metric = SimilarityMetric::cosine;

  friend bool operator==(const IndexMeta&, const IndexMeta&) = default;
};

struct Violation {
  std::string rule;
  NodeId node;

  std::string message() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const;
};

/// Immutable layered tree of nodes.
///
/// The constructor never throws on structural problems: it records them in
/// validation() so that validate_index can report on arbitrary inputs.
/// Anything that needs a well-formed tree calls require_valid() first.
///
/// Layer order is derived from the tree rather than from input order:
/// layer 0 is sorted by ascending id, and each deeper layer lists the
/// children of the previous layer in parent order, then stored child order.
class HierarchyIndex {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  HierarchyIndex(IndexMeta meta, std::vector<Node> nodes);

  const IndexMeta& meta() const { return meta_; }
  std::size_t dim() const { return meta_.dim; }
  SimilarityMetric metric() const { return meta_.metric; }

  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  const std::vector<std::vector<NodeId>>& layers() const { return layers_; }

  /// nullptr when absent. With duplicate ids the first occurrence wins.
  const Node* find(const NodeId& id) const;
  /// Throws InvalidIndexError when absent.
  const Node& at(const NodeId& id) const;

  const ValidationReport& validation() const { return validation_; }
  bool is_valid() const { return validation_.ok(); }
  /// Throws InvalidIndexError listing the first violations.
  void require_valid() const;

  // Dense topology over storage positions, for the query algorithms.
  std::size_t position(const NodeId& id) const;
  const Node& node_at(std::size_t pos) const { return nodes_[pos]; }
  std::span<const std::size_t> child_positions(std::size_t pos) const {
    return child_pos_[pos];
  }
  std::size_t parent_position(std::size_t pos) const { return parent_pos_[pos]; }
  std::span<const std::size_t> root_positions() const { return root_pos_; }

  /// Structural equality: same metadata and the same node set keyed by id.
  friend bool operator==(const HierarchyIndex& a, const HierarchyIndex& b);

 private:
  IndexMeta meta_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> by_id_;
  std::vector<std::vector<NodeId>> layers_;
  std::vector<std::vector<std::size_t>> child_pos_;
  std::vector<std::size_t> parent_pos_;
  std::vector<std::size_t> root_pos_;
  ValidationReport validation_;
};

/// Returns every invariant violation of the index; empty means valid.
ValidationReport validate_index(const HierarchyIndex& index);

}  // namespace hiro
