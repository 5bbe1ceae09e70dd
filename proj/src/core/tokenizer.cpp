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

#include "hiro/core/tokenizer.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

#include "hiro/errors.hpp"

namespace hiro {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

struct Registry {
  std::shared_mutex mutex;
  std::map<std::string, TokenizerFn, std::less<>> tokenizers;

  Registry() { tokenizers.emplace("whitespace", &whitespace_tokens); }
};

Registry& registry() {
  static Registry instance;
  return instance;
}

}  // namespace

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

void register_tokenizer(std::string id, TokenizerFn fn) {
  if (id == "whitespace") throw DomainError("the whitespace tokenizer cannot be replaced");
  auto& reg = registry();
  std::unique_lock lock(reg.mutex);
  reg.tokenizers.insert_or_assign(std::move(id), std::move(fn));
}

bool has_tokenizer(std::string_view id) {
  auto& reg = registry();
  std::shared_lock lock(reg.mutex);
  return reg.tokenizers.find(id) != reg.tokenizers.end();
}

std::vector<std::string> tokenize(std::string_view text, std::string_view id) {
  if (id == "whitespace") return whitespace_tokens(text);
  TokenizerFn fn;
  {
    auto& reg = registry();
    std::shared_lock lock(reg.mutex);
    auto it = reg.tokenizers.find(id);
    if (it == reg.tokenizers.end()) {
      throw UnknownTokenizerError("unknown tokenizer '" + std::string(id) + "'");
    }
    fn = it->second;
  }
  return fn(text);
}

std::size_t count_tokens(std::string_view text, std::string_view id) {
  if (id == "whitespace") {
    std::size_t count = 0;
    bool in_token = false;
    for (char c : text) {
      const bool space = is_space(c);
      if (!space && !in_token) ++count;
      in_token = !space;
    }
    return count;
  }
  return tokenize(text, id).size();
}

}  // namespace hiro
