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
#include "reasonattn/op_mapping.h"

#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "reasonattn/error.h"

namespace reasonattn {
namespace {

class OpMappingTest : public ::testing::Test {
 protected:
  OpMappingTable table_ = OpMappingTable::FromFile(REASONATTN_OP_MAP_PATH);
};

TEST_F(OpMappingTest, ShipsSeedTable) { EXPECT_GE(table_.size(), 30u); }

TEST_F(OpMappingTest, FilterSizeTable) {
  const StepTemplate t = table_.Normalize("filter size", {"table", "large"});
  EXPECT_EQ(t.kind, OpKind::kFilter);
  EXPECT_EQ(t.attribute, "large");
  EXPECT_EQ(t.category, "table");
}

TEST_F(OpMappingTest, DifferentColorIsCompareOnColor) {
  const StepTemplate t = table_.Normalize("different color", {"0", "1"});
  EXPECT_EQ(t.kind, OpKind::kCompare);
  EXPECT_EQ(t.attribute, "color");
  EXPECT_EQ(t.dep_refs, (std::vector<std::string>{"0", "1"}));
}

TEST_F(OpMappingTest, SelectIsIdentity) {
  const StepTemplate t = table_.Normalize("select", {"girl"});
  EXPECT_EQ(t.kind, OpKind::kSelect);
  EXPECT_EQ(t.category, "girl");
  EXPECT_FALSE(t.flagged);
}

TEST_F(OpMappingTest, RawNamesAreNormalized) {
  EXPECT_NE(table_.Find("Filter   Size"), nullptr);
}

TEST_F(OpMappingTest, ExistIsFlaggedVerify) {
  const StepTemplate t = table_.Normalize("exist", {});
  EXPECT_EQ(t.kind, OpKind::kVerify);
  EXPECT_TRUE(t.flagged);
}

TEST_F(OpMappingTest, UnmappedOperationNamesIt) {
  try {
    table_.Normalize("choose healthier", {"a"});
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("choose healthier"), std::string::npos);
  }
}

TEST_F(OpMappingTest, ArgumentCountMismatch) {
  EXPECT_THROW(table_.Normalize("select", {}), ValidationError);
}

TEST_F(OpMappingTest, CompilesRawProgram) {
  const auto ops = ParseRawProgram(R"([
    {"operation": "select", "arguments": ["jeans"]},
    {"operation": "relate", "arguments": ["girl", "wearing"], "dependencies": [0]},
    {"operation": "relate", "arguments": ["bag", "to the left of"], "dependencies": [1]},
    {"operation": "query color", "dependencies": [2]},
    {"operation": "select", "arguments": ["bag"]},
    {"operation": "exist", "dependencies": [4]},
    {"operation": "and", "arguments": ["3", "5"]}
  ])");
  std::vector<std::string> flagged;
  const ReasoningProgram p = CompileRawProgram(ops, table_, &flagged);
  ASSERT_EQ(p.steps.size(), 7u);
  EXPECT_EQ(p.steps[1].relation, "wearing");
  EXPECT_EQ(p.steps[3].kind, OpKind::kQuery);
  EXPECT_EQ(p.steps[3].attribute, "color");
  EXPECT_EQ(p.steps[6].deps, (std::vector<int>{3, 5}));
  EXPECT_EQ(flagged, std::vector<std::string>{"5:exist"});
}

TEST_F(OpMappingTest, CompiledProgramIsValidated) {
  const auto ops = ParseRawProgram(R"([{"operation": "query color"}])");
  EXPECT_THROW(CompileRawProgram(ops, table_), ProgramError);
}

TEST(OpMappingTableTest, RejectsUnknownKindAndRole) {
  EXPECT_THROW(OpMappingTable::FromJson(
                   R"([{"raw_op": "x", "kind": "teleport", "arg_roles": []}])"),
               Error);
  EXPECT_THROW(OpMappingTable::FromJson(
                   R"([{"raw_op": "x", "kind": "select", "arg_roles": ["colour"]}])"),
               Error);
  EXPECT_THROW(OpMappingTable::FromJson("{not json"), ParseError);
}

}  // namespace
}  // namespace reasonattn
