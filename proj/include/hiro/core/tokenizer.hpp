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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hiro {

using TokenizerFn = std::function<std::vector<std::string>(std::string_view)>;

/// Registers (or replaces) a tokenizer under `id`. "whitespace" is built in
/// and fixed; re-registering it throws DomainError.
void register_tokenizer(std::string id, TokenizerFn fn);
bool has_tokenizer(std::string_view id);

/// Splits `text` with the tokenizer registered under `id`.
/// Throws UnknownTokenizerError.
std::vector<std::string> tokenize(std::string_view text, std::string_view id);

/// Number of tokens; "whitespace" counts maximal non-whitespace runs.
std::size_t count_tokens(std::string_view text, std::string_view id);

/// Maximal runs of non-whitespace characters, in order.
std::vector<std::string> whitespace_tokens(std::string_view text);

}  // namespace hiro
