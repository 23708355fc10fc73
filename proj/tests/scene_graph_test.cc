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

#include <random>
#include <string>

#include <gtest/gtest.h>
#include "reasonattn/error.h"
#include "test_util.h"

namespace reasonattn {
namespace {

constexpr char kOneCar[] = R"({"image_id": "i1", "width": 100, "height": 100,
  "objects": {"o1": {"category": "car", "box": [0, 0, 10, 10],
                     "attributes": [], "relations": []}}})";

TEST(SceneGraphTest, ParsesMinimalDocument) {
  const SceneGraph g = ParseSceneGraph(kOneCar);
  ASSERT_EQ(g.objects.size(), 1u);
  EXPECT_EQ(g.object("o1").category, "car");
  EXPECT_EQ(g.object("o1").box, (BoundingBox{0, 0, 10, 10}));
}

TEST(SceneGraphTest, DanglingRelationNamesTarget) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 100,
    "objects": {"o1": {"category": "car", "box": [0, 0, 10, 10], "attributes": [],
                       "relations": [{"predicate": "near", "target": "o9"}]}}})";
  try {
    ParseSceneGraph(doc);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("o9"), std::string::npos);
  }
}

TEST(SceneGraphTest, DuplicateObjectIdIsRejected) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 100,
    "objects": {"o1": {"category": "car", "box": [0, 0, 10, 10]},
                "o1": {"category": "bus", "box": [0, 0, 10, 10]}}})";
  try {
    ParseSceneGraph(doc);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.subject(), "o1");
  }
}

TEST(SceneGraphTest, SyntaxErrorCarriesPosition) {
  try {
    ParseSceneGraph("{\n  \"image_id\": \"x\",\n  oops\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(SceneGraphTest, NonPositiveBoxIsRejected) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 100,
    "objects": {"o2": {"category": "car", "box": [5, 5, 0, 10]}}})";
  EXPECT_THROW(ParseSceneGraph(doc), ValidationError);
}

TEST(SceneGraphTest, BoxIsClippedToImage) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 50,
    "objects": {"o1": {"category": "car", "box": [-10, 40, 30, 30]}}})";
  EXPECT_EQ(ParseSceneGraph(doc).object("o1").box, (BoundingBox{0, 40, 20, 10}));
  const std::string outside = R"({"image_id": "i1", "width": 100, "height": 50,
    "objects": {"o1": {"category": "car", "box": [200, 0, 30, 30]}}})";
  EXPECT_THROW(ParseSceneGraph(outside), ValidationError);
}

TEST(SceneGraphTest, GirlJeansBagFixture) {
  const SceneGraph g = testing::LoadSceneFixture("girl_jeans_bag");
  EXPECT_EQ(g.objects.size(), 3u);
  std::size_t edges = 0;
  for (const auto& [id, o] : g.objects) edges += o.relations.size();
  EXPECT_EQ(edges, 2u);
  EXPECT_EQ(ObjectsByCategory(g, "girl"), ObjectIdSet{"girl1"});
  EXPECT_TRUE(ObjectsByCategory(g, "horse").empty());
}

TEST(SceneGraphTest, CategoryLookupKeepsMultiplicity) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 100,
    "objects": {"a": {"category": "Car", "box": [0, 0, 10, 10]},
                "b": {"category": "car", "box": [20, 0, 10, 10]},
                "c": {"category": "road", "box": [0, 50, 100, 50]}}})";
  const SceneGraph g = ParseSceneGraph(doc);
  EXPECT_EQ(ObjectsByCategory(g, "car"), (ObjectIdSet{"a", "b"}));
  EXPECT_EQ(ObjectsByCategory(g, " CAR "), (ObjectIdSet{"a", "b"}));
}

TEST(SceneGraphTest, HasAttributeNormalizes) {
  SceneObject o;
  o.attributes = {"red", "large"};
  EXPECT_TRUE(HasAttribute(o, "red"));
  EXPECT_FALSE(HasAttribute(o, "blue"));
  EXPECT_TRUE(HasAttribute(o, "Red"));
  EXPECT_EQ(HasAttribute(o, "red"), HasAttribute(o, "red"));
}

TEST(SceneGraphTest, TokensAreNormalizedAtParse) {
  const std::string doc = R"({"image_id": "i1", "width": 100, "height": 100,
    "objects": {"a": {"category": "Traffic   Light", "box": [0, 0, 10, 10],
                      "attributes": ["  Bright Red "]}}})";
  const SceneObject& o = ParseSceneGraph(doc).object("a");
  EXPECT_EQ(o.category, "traffic light");
  EXPECT_TRUE(o.attributes.contains("bright red"));
}

TEST(SceneGraphPropertyTest, RoundTripAndCategoryPartition) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const SceneGraph g = testing::RandomScene(rng, 1 + trial % 6, 640, 480);
    EXPECT_EQ(ParseSceneGraph(SerializeSceneGraph(g)), g);
    ObjectIdSet all;
    for (const auto& [id, o] : g.objects) {
      const ObjectIdSet found = ObjectsByCategory(g, o.category);
      for (const auto& f : found) EXPECT_TRUE(g.objects.contains(f));
      all.insert(found.begin(), found.end());
    }
    EXPECT_EQ(all.size(), g.objects.size());
  }
}

}  // namespace
}  // namespace reasonattn
