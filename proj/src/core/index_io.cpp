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

#include "hiro/core/index_io.hpp"

#include <fstream>
#include <sstream>

#include "hiro/errors.hpp"
#include "json.hpp"

namespace hiro {

using nlohmann::json;

namespace {

json node_to_json(const Node& node) {
  json j;
  j["id"] = node.id;
  j["layer"] = node.layer;
  j["parent"] = node.parent ? json(*node.parent) : json(nullptr);
  j["children"] = node.children;
  j["text"] = node.text;
  j["token_count"] = node.token_count;
  j["embedding"] = std::vector<double>(node.embedding.values().begin(),
                                       node.embedding.values().end());
  return j;
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

Node node_from_json(const json& j, std::size_t dim) {
  if (!j.is_object()) throw ParseError("node entry is not an object");
  Node node;
  node.id = field(j, "id").get<std::string>();
  node.layer = field(j, "layer").get<std::size_t>();
  const json& parent = field(j, "parent");
  if (!parent.is_null()) node.parent = parent.get<std::string>();
  node.children = field(j, "children").get<std::vector<std::string>>();
  node.text = field(j, "text").get<std::string>();
  node.token_count = field(j, "token_count").get<std::size_t>();
  auto values = field(j, "embedding").get<std::vector<double>>();
  if (values.size() != dim) {
    throw ParseError("node '" + node.id + "' has " + std::to_string(values.size()) +
                     " embedding values, header dim is " + std::to_string(dim));
  }
  node.embedding = Embedding(std::move(values));
  return node;
}

}  // namespace

std::string save_index(const HierarchyIndex& index) {
  json doc;
  doc["version"] = kIndexFormatVersion;
  doc["dim"] = index.dim();
  doc["embedder_id"] = index.meta().embedder_id;
  doc["tokenizer_id"] = index.meta().tokenizer_id;
  doc["metric"] = std::string(to_string(index.metric()));
  json nodes = json::array();
  // Layer order keeps files stable across runs.
  for (const auto& layer : index.layers()) {
    for (const NodeId& id : layer) nodes.push_back(node_to_json(index.at(id)));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

void save_index(const HierarchyIndex& index, std::ostream& out) { out << save_index(index); }

void save_index_file(const HierarchyIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  save_index(index, out);
}

HierarchyIndex load_index(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed index document: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("index document is not an object");
    if (field(doc, "version").get<int>() != kIndexFormatVersion) {
      throw ParseError("unsupported index version");
    }
    IndexMeta meta;
    meta.dim = field(doc, "dim").get<std::size_t>();
    if (meta.dim == 0) throw ParseError("dim must be positive");
    meta.embedder_id = field(doc, "embedder_id").get<std::string>();
    meta.tokenizer_id = field(doc, "tokenizer_id").get<std::string>();
    meta.metric = parse_metric(field(doc, "metric").get<std::string>());

    const json& entries = field(doc, "nodes");
    if (!entries.is_array()) throw ParseError("'nodes' is not an array");
    std::vector<Node> nodes;
    nodes.reserve(entries.size());
    for (const json& entry : entries) nodes.push_back(node_from_json(entry, meta.dim));

    HierarchyIndex index(std::move(meta), std::move(nodes));
    index.require_valid();
    return index;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed index document: ") + e.what());
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  } catch (const DegenerateVectorError& e) {
    throw ParseError(e.what());
  }
}

HierarchyIndex load_index(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_index(std::string_view(buffer.str()));
}

HierarchyIndex load_index_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open index file '" + path.string() + "'");
  return load_index(in);
}

}  // namespace hiro
