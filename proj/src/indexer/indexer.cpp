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

#include "hiro/indexer/indexer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"
#include "json.hpp"

namespace hiro {

void BuildConfig::validate() const {
  if (chunk_token_limit < 1) throw DomainError("chunk_token_limit must be >= 1");
  if (fan_out < 2) throw DomainError("fan_out must be >= 2");
  if (summary_token_budget && *summary_token_budget < 1) {
    throw DomainError("summary_token_budget must be >= 1");
  }
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

std::vector<Span> whitespace_spans(std::string_view text) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back({start, i});
  }
  return out;
}

bool ends_sentence(std::string_view token) {
  while (!token.empty() && std::string_view("\"')]}").find(token.back()) != std::string_view::npos) {
    token.remove_suffix(1);
  }
  return !token.empty() && (token.back() == '.' || token.back() == '!' || token.back() == '?');
}

// Token-index boundaries [begin, end) of each chunk.
std::vector<Span> chunk_bounds(const std::vector<std::string_view>& tokens, std::size_t limit) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens.size() - i <= limit) {
      out.push_back({i, tokens.size()});
      break;
    }
    std::size_t cut = i + limit;
    for (std::size_t j = i + limit; j > i; --j) {
      if (ends_sentence(tokens[j - 1])) {
        cut = j;
        break;
      }
    }
    out.push_back({i, cut});
    i = cut;
  }
  return out;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

struct SummarizerRegistry {
  std::mutex mutex;
  std::map<std::string, SummarizerFn, std::less<>> fns;

  SummarizerRegistry() {
    fns.emplace("concat-truncate", [](std::span<const std::string> texts, std::size_t budget,
                                      std::string_view tokenizer_id) {
      return default_summarize(texts, budget, tokenizer_id);
    });
  }
};

SummarizerRegistry& summarizers() {
  static SummarizerRegistry instance;
  return instance;
}

std::string layer_id(std::size_t layer, std::size_t pos, std::size_t width) {
  std::string p = std::to_string(pos);
  if (p.size() < width) p.insert(0, width - p.size(), '0');
  return "L" + std::to_string(layer) + "-" + p;
}

}  // namespace

std::vector<std::string> chunk_text(std::string_view document, std::size_t chunk_token_limit,
                                    std::string_view tokenizer_id) {
  if (chunk_token_limit < 1) throw DomainError("chunk_token_limit must be >= 1");
  std::vector<std::string> out;
  if (tokenizer_id == "whitespace") {
    const auto spans = whitespace_spans(document);
    if (spans.empty()) throw EmptyDocumentError("cannot chunk an empty document");
    std::vector<std::string_view> tokens;
    tokens.reserve(spans.size());
    for (const auto& s : spans) tokens.push_back(document.substr(s.begin, s.end - s.begin));
    for (const auto& b : chunk_bounds(tokens, chunk_token_limit)) {
      const std::size_t from = spans[b.begin].begin;
      const std::size_t to = spans[b.end - 1].end;
      out.emplace_back(document.substr(from, to - from));
    }
    return out;
  }

  const auto owned = tokenize(document, tokenizer_id);
  if (owned.empty()) throw EmptyDocumentError("cannot chunk an empty document");
  std::vector<std::string_view> tokens(owned.begin(), owned.end());
  for (const auto& b : chunk_bounds(tokens, chunk_token_limit)) {
    out.push_back(join(std::span(owned).subspan(b.begin, b.end - b.begin), " "));
  }
  return out;
}

std::string default_summarize(std::span<const std::string> texts, std::size_t token_budget,
                              std::string_view tokenizer_id) {
  if (texts.empty()) throw EmptyDocumentError("nothing to summarize");
  auto tokens = tokenize(join(texts, " "), tokenizer_id);
  if (tokens.empty()) throw EmptyDocumentError("nothing to summarize");
  if (tokens.size() > token_budget) tokens.resize(token_budget);
  return join(tokens, " ");
}

void register_summarizer(std::string id, SummarizerFn fn) {
  auto& reg = summarizers();
  std::lock_guard lock(reg.mutex);
  reg.fns.insert_or_assign(std::move(id), std::move(fn));
}

SummarizerFn summarizer(std::string_view id) {
  auto& reg = summarizers();
  std::lock_guard lock(reg.mutex);
  auto it = reg.fns.find(id);
  if (it == reg.fns.end()) throw DomainError("unknown summarizer '" + std::string(id) + "'");
  return it->second;
}

HierarchyIndex build_hierarchy(std::span<const std::string> chunks, const BuildConfig& config) {
  auto embedder = make_embedder(config.embedder);
  return build_hierarchy(chunks, config, *embedder);
}

HierarchyIndex build_hierarchy(std::span<const std::string> chunks, const BuildConfig& config,
                               Embedder& embedder) {
  config.validate();
  if (chunks.empty()) throw EmptyDocumentError("no chunks to index");
  for (const auto& c : chunks) {
    if (count_tokens(c, config.tokenizer_id) == 0) throw EmptyDocumentError("blank chunk");
  }
  const auto summarize = summarizer(config.summarizer_id);
  const std::size_t budget = config.summary_token_budget.value_or(config.chunk_token_limit);

  // levels[0] holds the leaves; the last level becomes layer 0.
  std::vector<std::vector<std::string>> levels;
  levels.emplace_back(chunks.begin(), chunks.end());
  while (levels.back().size() > config.fan_out) {
    const auto& below = levels.back();
    std::vector<std::string> above;
    above.reserve((below.size() + config.fan_out - 1) / config.fan_out);
    for (std::size_t start = 0; start < below.size(); start += config.fan_out) {
      const std::size_t len = std::min(config.fan_out, below.size() - start);
      above.push_back(summarize(std::span(below).subspan(start, len), budget, config.tokenizer_id));
    }
    levels.push_back(std::move(above));
  }

  const std::size_t depth = levels.size();
  std::size_t width = 1;
  for (std::size_t n = chunks.size(); n >= 10; n /= 10) ++width;

  std::vector<Node> nodes;
  std::size_t total = 0;
  for (const auto& level : levels) total += level.size();
  nodes.reserve(total);

  for (std::size_t lv = 0; lv < depth; ++lv) {
    const std::size_t layer = depth - 1 - lv;
    const auto& texts = levels[lv];
    auto embeddings = embedder.embed(texts);
    if (embeddings.size() != texts.size()) {
      throw EmbedServiceError("embedder returned the wrong number of vectors");
    }
    for (std::size_t i = 0; i < texts.size(); ++i) {
      Node node;
      node.id = layer_id(layer, i, width);
      node.layer = layer;
      if (layer > 0) node.parent = layer_id(layer - 1, i / config.fan_out, width);
      if (lv > 0) {
        const std::size_t first = i * config.fan_out;
        const std::size_t last = std::min(first + config.fan_out, levels[lv - 1].size());
        for (std::size_t c = first; c < last; ++c) node.children.push_back(layer_id(layer + 1, c, width));
      }
      node.text = texts[i];
      node.embedding = std::move(embeddings[i]);
      node.token_count = count_tokens(node.text, config.tokenizer_id);
      nodes.push_back(std::move(node));
    }
  }

  IndexMeta meta;
  meta.dim = embedder.dim();
  meta.embedder_id = embedder.id();
  meta.tokenizer_id = config.tokenizer_id;
  meta.metric = config.metric;
  HierarchyIndex index(std::move(meta), std::move(nodes));
  index.require_valid();
  return index;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  auto read_all = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + p.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  std::vector<Document> docs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) docs.push_back({f.stem().string(), read_all(f)});
  } else if (path.extension() == ".jsonl") {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        auto j = nlohmann::json::parse(line);
        docs.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  } else {
    docs.push_back({path.stem().string(), read_all(path)});
  }
  if (docs.empty()) throw EmptyDocumentError("corpus '" + path.string() + "' has no documents");
  return docs;
}

}  // namespace hiro
