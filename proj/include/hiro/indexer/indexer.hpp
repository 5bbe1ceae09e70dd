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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/embedding/embedder.hpp"

namespace hiro {

struct BuildConfig {
  std::size_t chunk_token_limit = 100;
  std::size_t fan_out = 4;
  std::string summarizer_id = "concat-truncate";
  EmbedderConfig embedder;
  std::string tokenizer_id = "whitespace";
  SimilarityMetric metric = SimilarityMetric::cosine;
  /// Token budget handed to the summarizer; defaults to chunk_token_limit.
  std::optional<std::size_t> summary_token_budget;

  void validate() const;
};

/// Splits a document into chunks of at most `chunk_token_limit` tokens,
/// cutting after the last sentence-ending token (. ! ?) inside the window
/// when there is one and hard-splitting at the limit otherwise.
/// With the whitespace tokenizer each chunk is an exact slice of the input.
std::vector<std::string> chunk_text(std::string_view document, std::size_t chunk_token_limit,
                                    std::string_view tokenizer_id);

/// Concatenates `texts` in order and keeps the first `token_budget` tokens.
std::string default_summarize(std::span<const std::string> texts, std::size_t token_budget,
                              std::string_view tokenizer_id);

using SummarizerFn = std::function<std::string(
    std::span<const std::string> texts, std::size_t token_budget, std::string_view tokenizer_id)>;

/// "concat-truncate" is built in.
void register_summarizer(std::string id, SummarizerFn fn);
/// Throws DomainError for unknown ids.
SummarizerFn summarizer(std::string_view id);

/// Bottom-up consecutive grouping: leaves are `chunks` in order, each upper
/// layer groups runs of fan_out children under a summarized parent, and the
/// first layer with at most fan_out nodes becomes layer 0.
HierarchyIndex build_hierarchy(std::span<const std::string> chunks, const BuildConfig& config);
HierarchyIndex build_hierarchy(std::span<const std::string> chunks, const BuildConfig& config,
                               Embedder& embedder);

struct Document {
  std::string id;
  std::string text;
};

/// Reads a JSONL file of {"id", "text"} objects, a plain-text file (one
/// document named after the file stem), or a directory of .txt files.
std::vector<Document> load_corpus(const std::filesystem::path& path);

}  // namespace hiro
