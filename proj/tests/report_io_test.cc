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
#include "reasonattn/report_io.h"

#include <random>
#include <string>

#include <gtest/gtest.h>
#include "reasonattn/error.h"
#include "test_util.h"

namespace reasonattn {
namespace {

TEST(ReportIoTest, TraceRoundTrip) {
  const SceneGraph g = testing::LoadSceneFixture("girl_jeans_bag");
  const ReasoningProgram p = ParseProgram(
      "0: select(category=jeans)\n1: relate(category=girl, relation=wearing) <- [0]\n"
      "2: relate(category=unicorn, relation=near) <- [1]");
  const RoiTrace trace =
      DeriveRoiTrace(p, g, BuildCooccurrence(std::span<const SceneGraph>(&g, 1)));
  const nlohmann::json doc = TraceToJson(p, trace);
  EXPECT_EQ(TraceFromJson(doc), trace);
  EXPECT_EQ(ParseProgram(doc.at("program").get<std::string>()), p);
  EXPECT_TRUE(trace.sets[2].fallback_used);
}

TEST(ReportIoTest, ReportRoundTripKeepsUndefinedScores) {
  std::mt19937_64 rng(1);
  const SceneGraph g = testing::LoadSceneFixture("girl_jeans_bag");
  const ReasoningProgram p = ParseProgram(
      "0: select(category=girl)\n1: filter(attribute=purple) <- [0]\n"
      "2: query(attribute=color) <- [1]");
  const RoiTrace trace =
      DeriveRoiTrace(p, g, BuildCooccurrence(std::span<const SceneGraph>(&g, 1)));
  const AirEReport r = ScoreTrace({testing::RandomGrid(rng, 16, 16), "human-correct", false},
                                  p, trace, g, "q7");
  const AirEReport back = ReportFromJson(ReportToJson(r));
  EXPECT_EQ(back.question_id, "q7");
  EXPECT_EQ(back.source, "human-correct");
  ASSERT_EQ(back.steps.size(), 3u);
  EXPECT_FALSE(back.steps[1].score.has_value());
  EXPECT_NEAR(*back.steps[0].score, *r.steps[0].score, 1e-11);
  EXPECT_EQ(back.per_kind_means.size(), r.per_kind_means.size());
  EXPECT_EQ(ReportToJson(back).dump(), ReportToJson(r).dump());
}

TEST(ReportIoTest, CsvRows) {
  AirEReport r;
  r.question_id = "q1";
  r.source = "machine";
  AirEStepScore a;
  a.step = 0;
  a.kind = OpKind::kSelect;
  a.score = 0.25;
  AirEStepScore b;
  b.step = 1;
  b.kind = OpKind::kFilter;
  b.fallback_used = true;
  r.steps = {a, b};
  EXPECT_EQ(CorpusCsvHeader(), "question_id,source,step,kind,score,fallback_used\n");
  EXPECT_EQ(ReportCsvRows(r), "q1,machine,0,select,0.25,0\nq1,machine,1,filter,,1\n");
}

TEST(ReportIoTest, TemporalMatrixRoundTripAndCsv) {
  const TemporalMatrix m = {{1.5, std::nullopt}, {-0.5, 2.0}};
  EXPECT_EQ(TemporalMatrixFromJson(TemporalMatrixToJson(m)), m);
  EXPECT_EQ(TemporalMatrixToCsv(m), "bin,step0,step1\n0,1.5,\n1,-0.5,2\n");
}

TEST(ReportIoTest, OutcomesCsv) {
  const auto o = ParseOutcomesCsv(
      "question_id,source,performance,n_participants\nq1,machine,0.5,\nq2,Human-Total,1,12\n");
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[1].source, "human-total");
  EXPECT_EQ(o[1].n_participants, 12);
  EXPECT_FALSE(o[0].n_participants.has_value());
  const auto back = ParseOutcomesCsv(OutcomesToCsv(o));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].performance, 1.0);
  EXPECT_THROW(ParseOutcomesCsv("qid,perf\n"), ParseError);
  EXPECT_THROW(ParseOutcomesCsv("question_id,source,performance\nq1,machine,abc\n"), ParseError);
}

}  // namespace
}  // namespace reasonattn
