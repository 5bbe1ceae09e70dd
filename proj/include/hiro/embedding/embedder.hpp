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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/rng.hpp"

namespace hiro {

inline constexpr const char* kEmbedEndpointEnv = "HIRO_EMBED_ENDPOINT";

struct EmbedderConfig {
  /// "deterministic" (hashed bag of words) or "remote".
  std::string embedder_id = "deterministic";
  std::size_t dim = 64;
  std::optional<std::string> endpoint;
  std::size_t batch_size = 32;
  std::chrono::milliseconds timeout{10000};
  std::size_t max_retries = 2;
  /// First retry delay; doubles on each further attempt.
  std::chrono::milliseconds backoff{100};

  /// The endpoint after applying the HIRO_EMBED_ENDPOINT override.
  std::optional<std::string> resolved_endpoint() const;
  /// Throws DomainError when the config breaks its invariants.
  void validate() const;
};

/// 64-bit FNV-1a over the bytes of `data`.
std::uint64_t stable_hash(std::string_view data);

/// Hashed bag of whitespace tokens: each token adds 1 to coordinate
/// stable_hash(token) % dim, and the result is L2-normalized.
/// Throws DegenerateVectorError for blank text.
Embedding embed_deterministic(std::string_view text, std::size_t dim);

/// Embeds through the JSON service at `{endpoint}/embed`, batch_size texts
/// per request, preserving input order. Throws EmbedServiceError after the
/// retries are exhausted or on a malformed reply, DimensionError when the
/// service returns vectors of the wrong width.
std::vector<Embedding> embed_batch_remote(std::span<const std::string> texts,
                                          const EmbedderConfig& config);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
};

class DeterministicEmbedder final : public Embedder {
 public:
  explicit DeterministicEmbedder(std::size_t dim);
  std::string id() const override { return "deterministic"; }
  std::size_t dim() const override { return dim_; }
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
};

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(EmbedderConfig config);
  std::string id() const override { return "remote"; }
  std::size_t dim() const override { return config_.dim; }
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

 private:
  EmbedderConfig config_;
};

/// Ignores the text and draws uniform points on the unit sphere from a
/// seeded stream; synthetic benchmark trees use it.
class RandomSphereEmbedder final : public Embedder {
 public:
  RandomSphereEmbedder(std::size_t dim, std::uint64_t seed);
  std::string id() const override { return "random-sphere"; }
  std::size_t dim() const override { return dim_; }
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

  Embedding draw();

 private:
  std::size_t dim_;
  Rng rng_;
};

/// Throws DomainError for unknown ids or invalid configs.
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

}  // namespace hiro
