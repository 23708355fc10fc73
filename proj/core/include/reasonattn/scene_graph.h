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
#ifndef REASONATTN_SCENE_GRAPH_H_
#define REASONATTN_SCENE_GRAPH_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reasonattn {

using ObjectId = std::string;
using ObjectIdSet = std::set<ObjectId>;

// Axis-aligned box in image pixels. Origin top-left, x right, y down.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Relation {
  std::string predicate;
  ObjectId target;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct SceneObject {
  ObjectId id;
  std::string category;
  BoundingBox box;
  std::set<std::string> attributes;
  std::vector<Relation> relations;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

// Immutable once parsed. Objects are keyed (and iterated) by id.
struct SceneGraph {
  std::string image_id;
  double width = 0.0;
  double height = 0.0;
  std::map<ObjectId, SceneObject> objects;

  const SceneObject& object(const ObjectId& id) const;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

// Parses a scene-graph JSON document:
//   {"image_id", "width", "height",
//    "objects": {id: {"category", "box": [x, y, w, h],
//                     "attributes": [...],
//                     "relations": [{"predicate", "target"}]}}}
// Tokens are normalized, boxes are clipped to the image rectangle.
// Throws ParseError on malformed JSON or schema mismatches and
// ValidationError (subject = object id) on duplicate ids, dangling relation
// targets and boxes with no area left after clipping.
SceneGraph ParseSceneGraph(std::string_view text);

// Inverse of ParseSceneGraph for already-validated graphs.
std::string SerializeSceneGraph(const SceneGraph& graph);

// Checks every SceneGraph invariant; throws ValidationError on the first one
// that fails. Used on programmatically built graphs.
void ValidateSceneGraph(const SceneGraph& graph);

ObjectIdSet ObjectsByCategory(const SceneGraph& graph,
                              std::string_view category);

bool HasAttribute(const SceneObject& object, std::string_view attribute);

// Clips `box` to [0, width] x [0, height]. The result may have zero area.
BoundingBox ClipBox(const BoundingBox& box, double width, double height);

}  // namespace reasonattn

#endif  // REASONATTN_SCENE_GRAPH_H_
