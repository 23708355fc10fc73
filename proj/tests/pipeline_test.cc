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
#include "reasonattn/pipeline.h"

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include "reasonattn/error.h"
#include "reasonattn/io.h"
#include "reasonattn/synth.h"
#include "test_util.h"

namespace reasonattn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

#ifdef REASONATTN_CLI_PATH
int RunCli(const std::string& args, std::string* stderr_text = nullptr) {
  testing::TempDir tmp;
  const fs::path err = tmp.path() / "stderr.txt";
  const std::string cmd =
      std::string(REASONATTN_CLI_PATH) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  if (stderr_text != nullptr) *stderr_text = ReadFile(err.string());
  return WEXITSTATUS(status);
}
#endif

TEST(ConfigTest, DefaultsMatchDocumentedValues) {
  const RunConfig c;
  EXPECT_EQ(c.k, 20);
  EXPECT_EQ(c.map_size, 256);
  EXPECT_EQ(c.sigma, 9.0);
  EXPECT_EQ(c.temporal_bins, DefaultTemporalBins());
  EXPECT_EQ(c.phi, 0.5);
  EXPECT_EQ(c.schedule_length, 300000);
  EXPECT_EQ(c.epsilon_kl, 1e-8);
  EXPECT_FALSE(c.strict_relate);
}

TEST(ConfigTest, FlatJsonOverridesAndRejectsUnknownKeys) {
  const RunConfig c = ConfigFromJson(
      R"({"k": 5, "sigma": 4.5, "bins": "0-500,500-900", "strict_relate": true, "C": 100})");
  EXPECT_EQ(c.k, 5);
  EXPECT_EQ(c.sigma, 4.5);
  ASSERT_EQ(c.temporal_bins.size(), 2u);
  EXPECT_EQ(c.temporal_bins[1], (TemporalBin{500, 900}));
  EXPECT_TRUE(c.strict_relate);
  EXPECT_EQ(c.schedule_length, 100);
  EXPECT_THROW(ConfigFromJson(R"({"kk": 5})"), ConfigError);
  EXPECT_THROW(ValidateConfig(ConfigFromJson(R"({"k": 0})")), ConfigError);
  EXPECT_THROW(ConfigFromJson("[1]"), ConfigError);
  EXPECT_THROW(ValidateConfig(ConfigFromJson(R"({"format": "xml"})")), ConfigError);
  EXPECT_THROW(ValidateConfig(ConfigFromJson(R"({"sigma": -1})")), ConfigError);
  EXPECT_NO_THROW(ValidateConfig(c));
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthOptions opt;
    opt.questions = 10;
    synth_ = GenerateSynthCorpus(opt);
    cfg_ = WriteCorpus(synth_.corpus, (dir_.path() / "corpus").string());
    cfg_.map_size = 64;
  }
  testing::TempDir dir_;
  SynthCorpus synth_;
  RunConfig cfg_;
};

TEST_F(PipelineTest, SyntheticTracesMatchKnownGroups) {
  const Corpus corpus = LoadCorpus(cfg_);
  EXPECT_TRUE(corpus.load_errors.empty());
  const EvaluationResult r = RunEvaluation(corpus, cfg_);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.questions.size(), 10u);
  for (const QuestionResult& q : r.questions) {
    EXPECT_EQ(ForwardedRois(q.trace.sets.back()), synth_.final_rois.at(q.question_id));
    EXPECT_EQ(q.reports.size(), 4u);  // three human maps and one machine map
    EXPECT_TRUE(q.temporal.has_value());
    EXPECT_EQ(q.targets.size(), q.program.steps.size());
    if (!synth_.expected_groups.contains(q.question_id)) {
      // Missing-referent template: groups depend on the co-occurrence table.
      EXPECT_TRUE(q.trace.sets[0].fallback_used) << q.question_id;
      continue;
    }
    const auto& want = synth_.expected_groups.at(q.question_id);
    ASSERT_EQ(q.trace.sets.size(), want.size()) << q.question_id;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(q.trace.sets[i].groups, want[i]) << q.question_id << " step " << i;
    }
  }
  EXPECT_FALSE(r.correlations.empty());
  EXPECT_TRUE(r.accuracy.has_value());
}

TEST_F(PipelineTest, JsonAndCsvEmission) {
  const EvaluationResult r = RunEvaluation(LoadCorpus(cfg_), cfg_);
  const fs::path out = dir_.path() / "json";
  const auto manifest = EmitReport(r, cfg_, "json", out.string());
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(out / "reports")) reports += e.is_regular_file();
  EXPECT_EQ(reports, 10u);
  EXPECT_EQ(manifest.size(), 11u);
  for (const auto& m : manifest) {
    EXPECT_EQ(m.sha256, Sha256Hex(ReadFile((out / m.path).string()))) << m.path;
  }
  const json summary = json::parse(ReadFile((out / "summary.json").string()));
  EXPECT_EQ(summary.at("questions").size(), 10u);

  const fs::path csv = dir_.path() / "csv";
  EmitReport(r, cfg_, "csv", csv.string());
  const std::string corpus = ReadFile((csv / "corpus.csv").string());
  std::size_t rows = 0, expected = 0;
  for (char c : corpus) rows += c == '\n';
  for (const auto& q : r.questions) expected += q.reports.size() * q.program.steps.size();
  EXPECT_EQ(rows, expected + 1);
  EXPECT_TRUE(fs::exists(csv / "correlation.csv"));
}

TEST_F(PipelineTest, ReRunsAreByteIdenticalAcrossWorkerCounts) {
  std::string manifests[3];
  const int jobs[3] = {1, 8, 8};
  for (int i = 0; i < 3; ++i) {
    RunConfig c = cfg_;
    c.jobs = jobs[i];
    const fs::path out = dir_.path() / ("run" + std::to_string(i));
    EmitReport(RunEvaluation(LoadCorpus(c), c), c, "json", out.string());
    manifests[i] = ReadFile((out / "manifest.json").string());
  }
  EXPECT_EQ(manifests[0], manifests[1]);
  EXPECT_EQ(manifests[1], manifests[2]);
}

TEST_F(PipelineTest, PerQuestionErrorsGoToTheLedger) {
  Corpus corpus = LoadCorpus(cfg_);
  corpus.questions[3].image_id = "no_such_image";
  corpus.questions[5].program_text = "0: select(category=a)\n1: and <- [0]";
  const EvaluationResult r = RunEvaluation(corpus, cfg_);
  EXPECT_EQ(r.questions.size(), 8u);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].question_id, corpus.questions[3].question_id);
}

#ifdef REASONATTN_CLI_PATH
TEST_F(PipelineTest, StoredTracesAreUsed) {
  const fs::path traces = dir_.path() / "traces";
  RunConfig c = cfg_;
  c.out = traces.string();
  const std::string base = " --scenes " + cfg_.scenes + " --questions " + cfg_.questions +
                           " --cooccurrence " + cfg_.cooccurrence;
  ASSERT_EQ(RunCli("trace" + base + " --out " + traces.string()), 0);
  c.traces = traces.string();
  const EvaluationResult stored = RunEvaluation(LoadCorpus(c), c);
  const EvaluationResult derived = RunEvaluation(LoadCorpus(cfg_), cfg_);
  ASSERT_EQ(stored.questions.size(), derived.questions.size());
  for (std::size_t i = 0; i < stored.questions.size(); ++i) {
    EXPECT_EQ(stored.questions[i].trace, derived.questions[i].trace);
  }
}

TEST(CliTest, ExitCodes) {
  testing::TempDir dir;
  std::string err;
  EXPECT_EQ(RunCli("report --scenes /nonexistent/scenes --questions q.json --out " +
                       dir.path().string(),
                   &err),
            2);
  EXPECT_NE(err.find("/nonexistent/scenes"), std::string::npos);
  EXPECT_EQ(RunCli("report --k 0 --out " + dir.path().string()), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);

  const fs::path corpus = dir.path() / "c";
  ASSERT_EQ(RunCli("synth --seed 3 --count 4 --out " + corpus.string()), 0);
  const std::string cfg = (corpus / "config.json").string();
  EXPECT_EQ(RunCli("report --config " + cfg + " --map-size 32 --out " + (dir.path() / "r").string()), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "r" / "manifest.json"));

  // Empty question list: nothing to score, still success.
  WriteFile((dir.path() / "empty.json").string(), "[]\n");
  EXPECT_EQ(RunCli("report --config " + cfg + " --questions " + (dir.path() / "empty.json").string() +
                   " --out " + (dir.path() / "e").string()),
            0);
  const json summary = json::parse(ReadFile((dir.path() / "e" / "summary.json").string()));
  EXPECT_TRUE(summary.at("questions").empty());

  // A question pointing at a missing image is a per-question error.
  json questions = json::parse(ReadFile((corpus / "questions.json").string()));
  questions[0]["image_id"] = "missing";
  WriteFile((dir.path() / "bad.json").string(), questions.dump());
  EXPECT_EQ(RunCli("report --config " + cfg + " --map-size 32 --questions " +
                       (dir.path() / "bad.json").string() + " --out " + (dir.path() / "b").string(),
                   &err),
            1);
  EXPECT_NE(err.find("missing"), std::string::npos);
}

TEST(CliTest, StagesChainTogether) {
  testing::TempDir dir;
  const fs::path corpus = dir.path() / "c";
  ASSERT_EQ(RunCli("synth --count 6 --out " + corpus.string()), 0);
  const std::string cfg = " --config " + (corpus / "config.json").string();
  const fs::path p = dir.path();
  EXPECT_EQ(RunCli("cooccur" + cfg + " --out " + (p / "co.json").string()), 0);
  EXPECT_EQ(CooccurrenceTable::FromJson(ReadFile((p / "co.json").string())),
            CooccurrenceTable::FromJson(ReadFile((corpus / "cooccurrence.json").string())));
  EXPECT_EQ(RunCli("fixmap" + cfg + " --map-size 32 --format csv --out " + (p / "fm").string()), 0);
  EXPECT_FALSE(fs::is_empty(p / "fm"));
  EXPECT_EQ(RunCli("targets" + cfg + " --out " + (p / "tg").string()), 0);
  EXPECT_EQ(RunCli("score" + cfg + " --map-size 32 --out " + (p / "sc").string()), 0);
  EXPECT_FALSE(fs::exists(p / "sc" / "summary.json"));
  EXPECT_EQ(RunCli("analyze --reports " + (p / "sc" / "reports").string() + " --outcomes " +
                   (corpus / "outcomes.csv").string() + " --fixations " +
                   (corpus / "fixations.csv").string() + " --out " + (p / "an").string()),
            0);
  EXPECT_TRUE(fs::exists(p / "an" / "correlation.csv"));
  EXPECT_TRUE(fs::exists(p / "an" / "accuracy.json"));
}

#endif  // REASONATTN_CLI_PATH

}  // namespace
}  // namespace reasonattn
