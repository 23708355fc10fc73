/* Copyright 2026 The ReasonAttn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "reasonattn/scene_graph.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "reasonattn/error.h"
#include "reasonattn/tokens.h"

namespace reasonattn {
namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(const std::string& what) {
  throw ParseError("scene graph: " + what, 0, 0);
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

double Number(const json& value, const std::string& where) {
  if (!value.is_number()) SchemaError(where + ": expected a number");
  return value.get<double>();
}

std::string String(const json& value, const std::string& where) {
  if (!value.is_string()) SchemaError(where + ": expected a string");
  return value.get<std::string>();
}

// Parses with a callback that rejects repeated keys inside "objects";
// nlohmann would otherwise keep the last one silently.
json ParseRejectingDuplicateIds(std::string_view text) {
  std::string top_key;
  std::set<std::string> seen_ids;
  std::string duplicate;
  json::parser_callback_t cb = [&](int depth, json::parse_event_t event,
                                   json& parsed) {
    if (event != json::parse_event_t::key) return true;
    if (depth == 1) {
      top_key = parsed.get<std::string>();
    } else if (depth == 2 && top_key == "objects") {
      auto id = parsed.get<std::string>();
      if (!seen_ids.insert(id).second && duplicate.empty()) duplicate = id;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), cb);
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("scene graph: syntax error: ") + e.what(),
                     pos.line, pos.column);
  }
  if (!duplicate.empty()) {
    throw ValidationError("scene graph: duplicate object id '" + duplicate +
                              "'",
                          duplicate);
  }
  return doc;
}

SceneObject ParseObject(const std::string& id, const json& node,
                        double width, double height) {
  const std::string where = "object '" + id + "'";
  if (!node.is_object()) SchemaError(where + ": expected an object");
  SceneObject obj;
  obj.id = id;
  obj.category = NormalizeToken(String(Field(node, "category", where), where));
  if (obj.category.empty()) {
    throw ValidationError(where + ": empty category", id);
  }

  const json& box = Field(node, "box", where);
  if (!box.is_array() || box.size() != 4) {
    SchemaError(where + ": box must be [x, y, w, h]");
  }
  BoundingBox raw{Number(box[0], where), Number(box[1], where),
                  Number(box[2], where), Number(box[3], where)};
  if (!(raw.w > 0.0) || !(raw.h > 0.0)) {
    throw ValidationError(where + ": non-positive box size", id);
  }
  obj.box = ClipBox(raw, width, height);
  if (!(obj.box.area() > 0.0)) {
    throw ValidationError(where + ": box has zero area inside the image", id);
  }

  if (auto it = node.find("attributes"); it != node.end()) {
    if (!it->is_array()) SchemaError(where + ": attributes must be an array");
    for (const auto& a : *it) obj.attributes.insert(NormalizeToken(String(a, where)));
  }
  if (auto it = node.find("relations"); it != node.end()) {
    if (!it->is_array()) SchemaError(where + ": relations must be an array");
    for (const auto& r : *it) {
      if (!r.is_object()) SchemaError(where + ": relation must be an object");
      obj.relations.push_back(
          {NormalizeToken(String(Field(r, "predicate", where), where)),
           String(Field(r, "target", where), where)});
    }
  }
  return obj;
}

}  // namespace

const SceneObject& SceneGraph::object(const ObjectId& id) const {
  auto it = objects.find(id);
  if (it == objects.end()) {
    throw ValidationError("unknown object id '" + id + "' in image '" +
                              image_id + "'",
                          id);
  }
  return it->second;
}

BoundingBox ClipBox(const BoundingBox& box, double width, double height) {
  const double x0 = std::clamp(box.x, 0.0, width);
  const double y0 = std::clamp(box.y, 0.0, height);
  const double x1 = std::clamp(box.right(), 0.0, width);
  const double y1 = std::clamp(box.bottom(), 0.0, height);
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

SceneGraph ParseSceneGraph(std::string_view text) {
  const json doc = ParseRejectingDuplicateIds(text);
  if (!doc.is_object()) SchemaError("document must be a JSON object");

  SceneGraph graph;
  graph.image_id = String(Field(doc, "image_id", "document"), "image_id");
  graph.width = Number(Field(doc, "width", "document"), "width");
  graph.height = Number(Field(doc, "height", "document"), "height");
  if (!(graph.width > 0.0) || !(graph.height > 0.0)) {
    throw ValidationError("scene graph: image size must be positive",
                          graph.image_id);
  }
  const json& objects = Field(doc, "objects", "document");
  if (!objects.is_object()) SchemaError("'objects' must be a JSON object");
  for (const auto& [id, node] : objects.items()) {
    graph.objects.emplace(id, ParseObject(id, node, graph.width, graph.height));
  }
  ValidateSceneGraph(graph);
  return graph;
}

void ValidateSceneGraph(const SceneGraph& graph) {
  if (!(graph.width > 0.0) || !(graph.height > 0.0)) {
    throw ValidationError("scene graph: image size must be positive",
                          graph.image_id);
  }
  for (const auto& [id, obj] : graph.objects) {
    if (obj.id != id) {
      throw ValidationError("object key '" + id + "' does not match its id",
                            id);
    }
    const BoundingBox& b = obj.box;
    if (!(b.area() > 0.0) || b.x < 0.0 || b.y < 0.0 ||
        b.right() > graph.width || b.bottom() > graph.height) {
      throw ValidationError("object '" + id + "': box outside image or empty",
                            id);
    }
    for (const Relation& rel : obj.relations) {
      if (!graph.objects.contains(rel.target)) {
        throw ValidationError("object '" + id +
                                  "': relation target '" + rel.target +
                                  "' does not exist",
                              rel.target);
      }
    }
  }
}

std::string SerializeSceneGraph(const SceneGraph& graph) {
  json objects = json::object();
  for (const auto& [id, obj] : graph.objects) {
    json rels = json::array();
    for (const Relation& r : obj.relations) {
      rels.push_back({{"predicate", r.predicate}, {"target", r.target}});
    }
    objects[id] = {
        {"category", obj.category},
        {"box", {obj.box.x, obj.box.y, obj.box.w, obj.box.h}},
        {"attributes", json(obj.attributes)},
        {"relations", std::move(rels)},
    };
  }
  json doc = {{"image_id", graph.image_id},
              {"width", graph.width},
              {"height", graph.height},
              {"objects", std::move(objects)}};
  return doc.dump(2);
}

ObjectIdSet ObjectsByCategory(const SceneGraph& graph,
                              std::string_view category) {
  const std::string wanted = NormalizeToken(category);
  ObjectIdSet out;
  for (const auto& [id, obj] : graph.objects) {
    if (obj.category == wanted) out.insert(id);
  }
  return out;
}

bool HasAttribute(const SceneObject& object, std::string_view attribute) {
  return object.attributes.contains(NormalizeToken(attribute));
}

}  // namespace reasonattn
