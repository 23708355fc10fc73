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
#ifndef REASONATTN_PIPELINE_H_
#define REASONATTN_PIPELINE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "reasonattn/aire.h"
#include "reasonattn/analytics.h"
#include "reasonattn/attention_map.h"
#include "reasonattn/op_mapping.h"
#include "reasonattn/program.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/scene_graph.h"
#include "reasonattn/supervision.h"

namespace reasonattn {

// Problems with configuration or corpus schema; the CLI exits with 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  // Inputs. Empty means "not provided".
  std::string scenes;        // directory of scene-graph JSON files
  std::string questions;     // JSON list of questions
  std::string fixations;     // fixation CSV
  std::string maps;          // directory: <question_id>/<source>.{json,csv,proposals.json}
  std::string outcomes;      // outcomes CSV
  std::string cooccurrence;  // co-occurrence JSON; built from scenes if empty
  std::string proposals;     // directory: <question_id>.json, list of [x, y, w, h]
  std::string op_map;        // raw-operation mapping table
  std::string traces;        // directory of precomputed traces (score only)
  std::string out;

  int k = kDefaultFallbackK;
  int map_size = kDefaultMapSize;
  double sigma = kDefaultSigma;
  std::vector<TemporalBin> temporal_bins = DefaultTemporalBins();
  double phi = kDefaultPhi;
  long schedule_length = kDefaultScheduleLength;
  double epsilon_kl = kKlEpsilon;
  bool strict_relate = false;
  int jobs = 0;  // 0: hardware concurrency
  std::string format = "json";
};

// Flat JSON object whose keys are the RunConfig field names ("bins" is a
// "lo-hi,..." string or a list of [lo, hi] pairs). Unknown keys are errors.
RunConfig ConfigFromJson(std::string_view text, RunConfig base = {});
// Throws ConfigError for out-of-range values.
void ValidateConfig(const RunConfig& cfg);

struct Question {
  std::string question_id;
  std::string image_id;
  // Either DSL text or a raw GQA-style program (compiled via the op map).
  std::string program_text;
  std::optional<std::vector<RawOperation>> raw_program;
};

// [{"question_id", "image_id", "program": "..."} |
//  {"question_id", "image_id", "raw_program": [...]}]
std::vector<Question> ParseQuestions(std::string_view text);
std::string QuestionsToJson(const std::vector<Question>& questions);

using MapInput = std::variant<Grid, ProposalAttention>;

struct LedgerEntry {
  std::string question_id;
  std::string message;
  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// Everything a run needs, in memory.
struct Corpus {
  std::map<std::string, SceneGraph> scenes;  // by image_id
  std::vector<Question> questions;
  std::vector<Fixation> fixations;
  std::map<std::string, std::map<std::string, MapInput>> maps;  // qid -> source
  std::vector<QuestionOutcome> outcomes;
  std::optional<CooccurrenceTable> cooccurrence;
  std::map<std::string, std::vector<BoundingBox>> proposals;  // qid
  std::optional<OpMappingTable> op_map;
  // Per-file problems found while loading (e.g. a scene that fails to parse).
  std::vector<LedgerEntry> load_errors;
};

// Reads every configured input. Throws IoError / ConfigError when a
// configured path is unreadable or a corpus-level file is malformed.
Corpus LoadCorpus(const RunConfig& cfg);

// Writes `corpus` in the layout LoadCorpus reads; returns a config pointing
// at it.
RunConfig WriteCorpus(const Corpus& corpus, const std::string& dir);

struct QuestionResult {
  std::string question_id;
  std::string image_id;
  ReasoningProgram program;
  RoiTrace trace;
  std::vector<AirEReport> reports;  // sorted by source
  std::optional<TemporalMatrix> temporal;
  std::vector<TargetAttention> targets;
  std::vector<std::string> flagged_ops;
};

struct EvaluationResult {
  std::vector<QuestionResult> questions;  // sorted by question_id
  std::vector<CorrelationTable> correlations;
  std::map<std::string, std::map<OpKind, double>> corpus_kind_means;
  TemporalMatrix temporal_mean;
  std::optional<AccuracyStats> accuracy;
  std::vector<LedgerEntry> errors;
};

// Per-question work (trace, maps, scores, targets) for one question.
QuestionResult EvaluateQuestion(const Question& question, const Corpus& corpus,
                                const CooccurrenceTable& table, const RunConfig& cfg);

// Trace -> maps -> scores -> analytics over the whole corpus, on
// cfg.jobs workers. Per-question failures land in `errors`.
EvaluationResult RunEvaluation(const Corpus& corpus, const RunConfig& cfg);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
};

// Writes reports in `format` ("json" or "csv") under `out_dir` plus
// manifest.json, and returns the manifest entries. Without `with_summary`
// only per-question output is written (json: reports/<id>.json, csv:
// corpus.csv).
std::vector<ManifestEntry> EmitReport(const EvaluationResult& result,
                                      const RunConfig& cfg, const std::string& format,
                                      const std::string& out_dir, bool with_summary = true);

// The per-question document EmitReport writes to reports/<id>.json.
nlohmann::json QuestionResultToJson(const QuestionResult& q);

std::string Sha256Hex(std::string_view data);

}  // namespace reasonattn

#endif  // REASONATTN_PIPELINE_H_
