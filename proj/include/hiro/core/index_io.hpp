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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "hiro/core/types.hpp"

namespace hiro {

inline constexpr int kIndexFormatVersion = 1;

/// Serializes to the versioned JSON index document. Doubles are written in
/// shortest round-trip form, so load(save(x)) reproduces every bit.
std::string save_index(const HierarchyIndex& index);
void save_index(const HierarchyIndex& index, std::ostream& out);
void save_index_file(const HierarchyIndex& index, const std::filesystem::path& path);

/// Parses and validates. Throws ParseError on malformed documents and
/// InvalidIndexError when the tree breaks an invariant.
HierarchyIndex load_index(std::string_view document);
HierarchyIndex load_index(std::istream& in);
HierarchyIndex load_index_file(const std::filesystem::path& path);

}  // namespace hiro
