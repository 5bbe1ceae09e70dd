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

#include "hiro/embedding/embedder.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hiro {

std::optional<std::string> EmbedderConfig::resolved_endpoint() const {
  if (const char* env = std::getenv(kEmbedEndpointEnv); env != nullptr && *env != '\0') {
    return std::string(env);
  }
  return endpoint;
}

void EmbedderConfig::validate() const {
  if (dim == 0) throw DomainError("embedder dim must be positive");
  if (batch_size == 0) throw DomainError("embedder batch_size must be positive");
  if (embedder_id == "remote") {
    if (!resolved_endpoint()) throw DomainError("remote embedder requires an endpoint");
  } else if (endpoint) {
    throw DomainError("endpoint is only valid for the remote embedder");
  }
}

std::uint64_t stable_hash(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Embedding embed_deterministic(std::string_view text, std::size_t dim) {
  if (dim == 0) throw DimensionError("embedding dim must be positive");
  const auto tokens = whitespace_tokens(text);
  if (tokens.empty()) throw DegenerateVectorError("cannot embed blank text");
  std::vector<double> values(dim, 0.0);
  for (const auto& token : tokens) values[stable_hash(token) % dim] += 1.0;
  double norm = 0.0;
  for (double v : values) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : values) v /= norm;
  return Embedding(std::move(values));
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.base = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!ep.base.empty() && ep.base.back() == '/') ep.base.pop_back();
  return ep;
}

std::vector<Embedding> parse_reply(const std::string& body, std::size_t expected,
                                   std::size_t dim) {
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw EmbedServiceError(std::string("malformed embedding reply: ") + e.what());
  }
  auto it = reply.find("embeddings");
  if (!reply.is_object() || it == reply.end() || !it->is_array()) {
    throw EmbedServiceError("embedding reply lacks an 'embeddings' array");
  }
  if (it->size() != expected) {
    throw EmbedServiceError("embedding service returned " + std::to_string(it->size()) +
                            " vectors for " + std::to_string(expected) + " texts");
  }
  std::vector<Embedding> out;
  out.reserve(expected);
  for (const auto& row : *it) {
    std::vector<double> values;
    try {
      values = row.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw EmbedServiceError(std::string("malformed embedding row: ") + e.what());
    }
    if (values.size() != dim) {
      throw DimensionError("embedding service returned dim " + std::to_string(values.size()) +
                           ", expected " + std::to_string(dim));
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

}  // namespace

std::vector<Embedding> embed_batch_remote(std::span<const std::string> texts,
                                          const EmbedderConfig& config) {
  if (texts.empty()) return {};
  config.validate();
  for (const auto& t : texts) {
    if (whitespace_tokens(t).empty()) throw DegenerateVectorError("cannot embed blank text");
  }
  const Endpoint ep = split_endpoint(*config.resolved_endpoint());
  httplib::Client client(ep.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += config.batch_size) {
    const auto batch = texts.subspan(start, std::min(config.batch_size, texts.size() - start));
    const std::string body = nlohmann::json{{"texts", batch}}.dump();

    std::string failure;
    bool done = false;
    for (std::size_t attempt = 0; attempt <= config.max_retries && !done; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(config.backoff * (1LL << (attempt - 1)));
      auto res = client.Post(ep.base + "/embed", body, "application/json");
      if (!res) {
        failure = "request failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        failure = "HTTP status " + std::to_string(res->status);
        continue;
      }
      auto vectors = parse_reply(res->body, batch.size(), config.dim);
      for (auto& v : vectors) out.push_back(std::move(v));
      done = true;
    }
    if (!done) {
      throw EmbedServiceError("embedding batch at offset " + std::to_string(start) + " to " +
                              ep.origin + ep.base + "/embed failed after " + std::to_string(config.max_retries + 1) +
                              " attempts: " + failure);
    }
  }
  return out;
}

DeterministicEmbedder::DeterministicEmbedder(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DomainError("embedder dim must be positive");
}

std::vector<Embedding> DeterministicEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_deterministic(t, dim_));
  return out;
}

RemoteEmbedder::RemoteEmbedder(EmbedderConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::vector<Embedding> RemoteEmbedder::embed(std::span<const std::string> texts) {
  return embed_batch_remote(texts, config_);
}

RandomSphereEmbedder::RandomSphereEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), rng_(seed) {
  if (dim == 0) throw DomainError("embedder dim must be positive");
}

Embedding RandomSphereEmbedder::draw() {
  std::vector<double> values(dim_);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (double& v : values) {
      v = rng_.normal();
      norm += v * v;
    }
  }
  norm = std::sqrt(norm);
  for (double& v : values) v /= norm;
  return Embedding(std::move(values));
}

std::vector<Embedding> RandomSphereEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(draw());
  return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
  config.validate();
  if (config.embedder_id == "deterministic") {
    return std::make_unique<DeterministicEmbedder>(config.dim);
  }
  if (config.embedder_id == "remote") return std::make_unique<RemoteEmbedder>(config);
  throw DomainError("unknown embedder '" + config.embedder_id + "'");
}

}  // namespace hiro
