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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "reasonattn/csv.h"
#include "reasonattn/io.h"
#include "reasonattn/report_io.h"
#include "reasonattn/tokens.h"

namespace reasonattn {

namespace fs = std::filesystem;
using nlohmann::json;

// --- configuration ----------------------------------------------------------

RunConfig ConfigFromJson(std::string_view text, RunConfig cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a flat JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "scenes") cfg.scenes = value.get<std::string>();
      else if (key == "questions") cfg.questions = value.get<std::string>();
      else if (key == "fixations") cfg.fixations = value.get<std::string>();
      else if (key == "maps") cfg.maps = value.get<std::string>();
      else if (key == "outcomes") cfg.outcomes = value.get<std::string>();
      else if (key == "cooccurrence") cfg.cooccurrence = value.get<std::string>();
      else if (key == "proposals") cfg.proposals = value.get<std::string>();
      else if (key == "op_map") cfg.op_map = value.get<std::string>();
      else if (key == "traces") cfg.traces = value.get<std::string>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "k") cfg.k = value.get<int>();
      else if (key == "map_size") cfg.map_size = value.get<int>();
      else if (key == "sigma") cfg.sigma = value.get<double>();
      else if (key == "phi") cfg.phi = value.get<double>();
      else if (key == "C" || key == "schedule_length") cfg.schedule_length = value.get<long>();
      else if (key == "epsilon_kl") cfg.epsilon_kl = value.get<double>();
      else if (key == "strict_relate") cfg.strict_relate = value.get<bool>();
      else if (key == "jobs") cfg.jobs = value.get<int>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "bins" || key == "temporal_bins") {
        if (value.is_string()) {
          cfg.temporal_bins = ParseTemporalBins(value.get<std::string>());
        } else {
          cfg.temporal_bins.clear();
          for (const json& b : value) {
            cfg.temporal_bins.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
          }
        }
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

void ValidateConfig(const RunConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("config: k must be >= 1");
  if (cfg.map_size < 1) throw ConfigError("config: map_size must be >= 1");
  if (!(cfg.sigma > 0.0)) throw ConfigError("config: sigma must be > 0");
  if (!(cfg.phi >= 0.0)) throw ConfigError("config: phi must be >= 0");
  if (cfg.schedule_length <= 0) throw ConfigError("config: C must be > 0");
  if (!(cfg.epsilon_kl > 0.0)) throw ConfigError("config: epsilon_kl must be > 0");
  if (cfg.jobs < 0) throw ConfigError("config: jobs must be >= 0");
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ConfigError("config: format must be json or csv");
  }
  try {
    SliceFixationsTemporal({}, cfg.temporal_bins);
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

// --- questions --------------------------------------------------------------

std::vector<Question> ParseQuestions(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("questions: ") + e.what(), pos.line, pos.column);
  }
  if (!doc.is_array()) throw ParseError("questions: expected a JSON array", 0, 0);
  std::vector<Question> out;
  std::set<std::string> seen;
  try {
    for (const json& q : doc) {
      Question question;
      question.question_id = q.at("question_id").get<std::string>();
      question.image_id = q.at("image_id").get<std::string>();
      if (auto it = q.find("raw_program"); it != q.end()) {
        question.raw_program = ParseRawProgram(it->dump());
      } else {
        question.program_text = q.at("program").get<std::string>();
      }
      if (!seen.insert(question.question_id).second) {
        throw ParseError("questions: duplicate question_id '" + question.question_id + "'",
                         0, 0);
      }
      out.push_back(std::move(question));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("questions: ") + e.what(), 0, 0);
  }
  return out;
}

std::string QuestionsToJson(const std::vector<Question>& questions) {
  json doc = json::array();
  for (const auto& q : questions) {
    json item = {{"question_id", q.question_id}, {"image_id", q.image_id}};
    if (q.raw_program) {
      json ops = json::array();
      for (const auto& op : *q.raw_program) {
        ops.push_back({{"operation", op.operation},
                       {"arguments", op.arguments},
                       {"dependencies", op.dependencies}});
      }
      item["raw_program"] = std::move(ops);
    } else {
      item["program"] = q.program_text;
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(1);
}

// --- corpus loading ---------------------------------------------------------

namespace {

std::vector<fs::path> SortedEntries(const std::string& dir, bool directories) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("cannot read directory '" + dir + "'", dir);
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (directories ? entry.is_directory() : entry.is_regular_file()) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<BoundingBox> ParseProposalBoxes(std::string_view text) {
  std::vector<BoundingBox> boxes;
  try {
    for (const json& item : json::parse(text)) {
      const json& b = item.is_object() ? item.at("box") : item;
      const auto v = b.get<std::vector<double>>();
      if (v.size() != 4) throw ParseError("proposal box must be [x, y, w, h]", 0, 0);
      if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
        throw ParseError("proposal box must have positive size", 0, 0);
      }
      boxes.push_back({v[0], v[1], v[2], v[3]});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("proposals: ") + e.what(), 0, 0);
  }
  if (boxes.empty()) throw ParseError("proposals: empty list", 0, 0);
  return boxes;
}

template <typename Fn>
auto WrapConfig(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

Corpus LoadCorpus(const RunConfig& cfg) {
  Corpus corpus;
  if (cfg.scenes.empty()) throw ConfigError("config: 'scenes' is required");
  if (cfg.questions.empty()) throw ConfigError("config: 'questions' is required");

  for (const fs::path& p : SortedEntries(cfg.scenes, false)) {
    if (p.extension() != ".json") continue;
    try {
      SceneGraph g = ParseSceneGraph(ReadFile(p.string()));
      const std::string id = g.image_id;
      if (!corpus.scenes.emplace(id, std::move(g)).second) {
        corpus.load_errors.push_back({"", "scene file '" + p.string() +
                                              "': duplicate image_id '" + id + "'"});
      }
    } catch (const Error& e) {
      corpus.load_errors.push_back({"", "scene file '" + p.string() + "': " + e.what()});
    }
  }

  corpus.questions = WrapConfig(cfg.questions, [&] {
    return ParseQuestions(ReadFile(cfg.questions));
  });
  if (!cfg.fixations.empty()) {
    corpus.fixations = WrapConfig(cfg.fixations, [&] {
      return ParseFixationCsv(ReadFile(cfg.fixations));
    });
  }
  if (!cfg.outcomes.empty()) {
    corpus.outcomes = WrapConfig(cfg.outcomes, [&] {
      return ParseOutcomesCsv(ReadFile(cfg.outcomes));
    });
  }
  if (!cfg.cooccurrence.empty()) {
    corpus.cooccurrence = WrapConfig(cfg.cooccurrence, [&] {
      return CooccurrenceTable::FromJson(ReadFile(cfg.cooccurrence));
    });
  }
  if (!cfg.op_map.empty()) {
    corpus.op_map = WrapConfig(cfg.op_map, [&] { return OpMappingTable::FromFile(cfg.op_map); });
  }

  if (!cfg.maps.empty()) {
    for (const fs::path& qdir : SortedEntries(cfg.maps, true)) {
      const std::string qid = qdir.filename().string();
      for (const fs::path& f : SortedEntries(qdir.string(), false)) {
        const std::string name = f.filename().string();
        std::string source;
        try {
          if (EndsWith(name, ".proposals.json")) {
            source = name.substr(0, name.size() - 15);
            corpus.maps[qid][source] = ParseProposalAttention(ReadFile(f.string()));
          } else if (EndsWith(name, ".json")) {
            source = name.substr(0, name.size() - 5);
            corpus.maps[qid][source] = GridFromJson(ReadFile(f.string()));
          } else if (EndsWith(name, ".csv")) {
            source = name.substr(0, name.size() - 4);
            corpus.maps[qid][source] = GridFromCsv(ReadFile(f.string()));
          } else {
            continue;
          }
          if (!IsValidSource(source)) {
            corpus.maps[qid].erase(source);
            throw Error("unknown map source '" + source + "'");
          }
        } catch (const Error& e) {
          corpus.load_errors.push_back({qid, "map file '" + f.string() + "': " + e.what()});
        }
      }
    }
  }

  if (!cfg.proposals.empty()) {
    for (const fs::path& f : SortedEntries(cfg.proposals, false)) {
      if (f.extension() != ".json") continue;
      const std::string qid = f.stem().string();
      try {
        corpus.proposals[qid] = ParseProposalBoxes(ReadFile(f.string()));
      } catch (const Error& e) {
        corpus.load_errors.push_back({qid, "proposal file '" + f.string() + "': " + e.what()});
      }
    }
  }
  return corpus;
}

RunConfig WriteCorpus(const Corpus& corpus, const std::string& dir) {
  RunConfig cfg;
  const fs::path root(dir);
  cfg.scenes = (root / "scenes").string();
  fs::create_directories(cfg.scenes);
  for (const auto& [id, g] : corpus.scenes) {
    WriteFile((root / "scenes" / (id + ".json")).string(), SerializeSceneGraph(g));
  }
  cfg.questions = (root / "questions.json").string();
  WriteFile(cfg.questions, QuestionsToJson(corpus.questions));
  if (!corpus.fixations.empty()) {
    cfg.fixations = (root / "fixations.csv").string();
    WriteFile(cfg.fixations, FixationsToCsv(corpus.fixations));
  }
  if (!corpus.outcomes.empty()) {
    cfg.outcomes = (root / "outcomes.csv").string();
    WriteFile(cfg.outcomes, OutcomesToCsv(corpus.outcomes));
  }
  if (corpus.cooccurrence) {
    cfg.cooccurrence = (root / "cooccurrence.json").string();
    WriteFile(cfg.cooccurrence, corpus.cooccurrence->ToJson());
  }
  if (!corpus.maps.empty()) {
    cfg.maps = (root / "maps").string();
    for (const auto& [qid, sources] : corpus.maps) {
      for (const auto& [source, input] : sources) {
        const fs::path base = root / "maps" / qid;
        if (const Grid* g = std::get_if<Grid>(&input)) {
          WriteFile((base / (source + ".json")).string(), GridToJson(*g));
        } else {
          json list = json::array();
          for (const auto& p : std::get<ProposalAttention>(input).proposals) {
            list.push_back({{"box", {p.box.x, p.box.y, p.box.w, p.box.h}},
                            {"weight", p.weight}});
          }
          WriteFile((base / (source + ".proposals.json")).string(), list.dump());
        }
      }
    }
  }
  if (!corpus.proposals.empty()) {
    cfg.proposals = (root / "proposals").string();
    for (const auto& [qid, boxes] : corpus.proposals) {
      json list = json::array();
      for (const auto& b : boxes) list.push_back({b.x, b.y, b.w, b.h});
      WriteFile((root / "proposals" / (qid + ".json")).string(), list.dump());
    }
  }
  return cfg;
}

// --- evaluation -------------------------------------------------------------

namespace {

AttentionMap MapFromInput(const MapInput& input, const std::string& source,
                          ImageSize image, int size) {
  if (const Grid* g = std::get_if<Grid>(&input)) {
    Grid grid = (g->rows() == size && g->cols() == size) ? *g : ResampleBilinear(*g, size, size);
    return NormalizeByMax(std::move(grid), source);
  }
  return RasterizeProposalAttention(std::get<ProposalAttention>(input), image, size, source);
}

QuestionResult Evaluate(const Question& question, const Corpus& corpus,
                        const CooccurrenceTable& table, const RunConfig& cfg,
                        std::span<const Fixation> fixations) {
  auto scene_it = corpus.scenes.find(question.image_id);
  if (scene_it == corpus.scenes.end()) {
    throw Error("no scene graph for image '" + question.image_id + "'");
  }
  const SceneGraph& graph = scene_it->second;
  const ImageSize image = ImageSizeOf(graph);

  QuestionResult r;
  r.question_id = question.question_id;
  r.image_id = question.image_id;
  if (question.raw_program) {
    if (!corpus.op_map) throw Error("raw program given but no operation map is configured");
    r.program = CompileRawProgram(*question.raw_program, *corpus.op_map, &r.flagged_ops);
  } else {
    r.program = ParseProgram(question.program_text);
  }

  const fs::path trace_file =
      cfg.traces.empty() ? fs::path() : fs::path(cfg.traces) / (question.question_id + ".json");
  if (!trace_file.empty() && fs::exists(trace_file)) {
    r.trace = TraceFromJson(json::parse(ReadFile(trace_file.string())));
    if (r.trace.sets.size() != r.program.steps.size()) {
      throw Error("stored trace does not match the program length");
    }
    for (const RoiSet& rs : r.trace.sets) {
      for (const auto& g : rs.groups) {
        for (const auto& id : g) graph.object(id);
      }
    }
  } else {
    r.trace = DeriveRoiTrace(r.program, graph, table, {cfg.k, cfg.strict_relate});
  }

  std::map<std::string, AttentionMap> maps;
  if (auto it = corpus.maps.find(question.question_id); it != corpus.maps.end()) {
    for (const auto& [source, input] : it->second) {
      maps.emplace(source, MapFromInput(input, source, image, cfg.map_size));
    }
  }
  if (!fixations.empty()) {
    std::vector<Fixation> correct, incorrect;
    for (const Fixation& f : fixations) (f.is_correct ? correct : incorrect).push_back(f);
    auto add_human = [&](std::string_view source, std::span<const Fixation> fs) {
      if (fs.empty() || maps.contains(std::string(source))) return;
      maps.emplace(std::string(source),
                   FixationsToMap(fs, image, cfg.map_size, cfg.sigma, std::string(source)));
    };
    add_human(kHumanTotal, fixations);
    add_human(kHumanCorrect, correct);
    add_human(kHumanIncorrect, incorrect);

    const TemporalSlices slices = SliceFixationsTemporal(fixations, cfg.temporal_bins);
    std::vector<AttentionMap> by_bin;
    for (const auto& bin : slices.bins) {
      by_bin.push_back(FixationsToMap(bin, image, cfg.map_size, cfg.sigma,
                                      std::string(kHumanTotal)));
    }
    r.temporal = ScoreTemporalMatrix(by_bin, r.program, r.trace, graph);
  }
  for (const auto& [source, m] : maps) {
    r.reports.push_back(ScoreTrace(m, r.program, r.trace, graph, question.question_id));
  }

  if (auto it = corpus.proposals.find(question.question_id); it != corpus.proposals.end()) {
    for (const RoiSet& rs : r.trace.sets) {
      r.targets.push_back(DeriveTargetAttention(rs, it->second, graph));
    }
  }
  return r;
}

CooccurrenceTable TableFor(const Corpus& corpus) {
  if (corpus.cooccurrence) return *corpus.cooccurrence;
  if (corpus.scenes.empty()) {
    return CooccurrenceTable::FromJson(R"({"categories": [], "counts": []})");
  }
  CooccurrenceTable::Builder builder;
  for (const auto& [id, g] : corpus.scenes) builder.Add(g);
  return builder.Build();
}

int WorkerCount(int jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

QuestionResult EvaluateQuestion(const Question& question, const Corpus& corpus,
                                const CooccurrenceTable& table, const RunConfig& cfg) {
  std::vector<Fixation> mine;
  for (const Fixation& f : corpus.fixations) {
    if (f.question_id == question.question_id) mine.push_back(f);
  }
  return Evaluate(question, corpus, table, cfg, mine);
}

EvaluationResult RunEvaluation(const Corpus& corpus, const RunConfig& cfg) {
  ValidateConfig(cfg);
  const CooccurrenceTable table = TableFor(corpus);

  std::map<std::string, std::vector<Fixation>> fixations_by_question;
  for (const Fixation& f : corpus.fixations) fixations_by_question[f.question_id].push_back(f);
  static const std::vector<Fixation> kNoFixations;

  const std::size_t n = corpus.questions.size();
  std::vector<std::optional<QuestionResult>> results(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      const Question& q = corpus.questions[i];
      auto fit = fixations_by_question.find(q.question_id);
      try {
        results[i] = Evaluate(q, corpus, table, cfg,
                              fit == fixations_by_question.end() ? kNoFixations : fit->second);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int workers = std::min<int>(WorkerCount(cfg.jobs), static_cast<int>(std::max<std::size_t>(n, 1)));
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }

  EvaluationResult out;
  out.errors = corpus.load_errors;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      out.questions.push_back(std::move(*results[i]));
    } else {
      out.errors.push_back({corpus.questions[i].question_id, failures[i]});
    }
  }
  std::sort(out.questions.begin(), out.questions.end(),
            [](const auto& a, const auto& b) { return a.question_id < b.question_id; });
  std::stable_sort(out.errors.begin(), out.errors.end(), [](const auto& a, const auto& b) {
    return a.question_id < b.question_id;
  });

  std::vector<AirEReport> reports;
  std::vector<TemporalMatrix> temporal;
  std::map<std::string, std::map<OpKind, std::pair<double, int>>> kind_sums;
  for (const auto& q : out.questions) {
    for (const auto& rep : q.reports) {
      reports.push_back(rep);
      for (const auto& [kind, v] : rep.per_kind_means) {
        auto& [sum, count] = kind_sums[rep.source][kind];
        sum += v;
        ++count;
      }
    }
    if (q.temporal) temporal.push_back(*q.temporal);
  }
  for (const auto& [source, kinds] : kind_sums) {
    for (const auto& [kind, acc] : kinds) {
      out.corpus_kind_means[source][kind] = acc.first / acc.second;
    }
  }
  out.temporal_mean = MeanTemporalMatrix(temporal);

  // Outcomes: explicit rows win; human sources otherwise share the
  // trial-derived fraction of correct answers.
  std::vector<QuestionOutcome> outcomes = corpus.outcomes;
  if (!corpus.fixations.empty()) {
    const std::vector<Trial> trials = TrialsFromFixations(corpus.fixations);
    const std::vector<QuestionOutcome> human = HumanOutcomesFromTrials(trials);
    out.accuracy = AnswerAccuracyStats(human, trials);
    std::set<std::string> explicit_sources;
    for (const auto& o : corpus.outcomes) explicit_sources.insert(o.source);
    for (std::string_view source : {kHumanCorrect, kHumanIncorrect, kHumanTotal}) {
      if (explicit_sources.contains(std::string(source))) continue;
      for (QuestionOutcome o : human) {
        o.source = std::string(source);
        outcomes.push_back(std::move(o));
      }
    }
  }
  out.correlations = CorrelateBySource(reports, outcomes);
  return out;
}

// --- emission ---------------------------------------------------------------

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

json ConfigSummary(const RunConfig& cfg) {
  json bins = json::array();
  for (const auto& b : cfg.temporal_bins) bins.push_back({RoundReal(b.lo_ms), RoundReal(b.hi_ms)});
  return {{"k", cfg.k},
          {"map_size", cfg.map_size},
          {"sigma", RoundReal(cfg.sigma)},
          {"temporal_bins", std::move(bins)},
          {"phi", RoundReal(cfg.phi)},
          {"C", cfg.schedule_length},
          {"epsilon_kl", RoundReal(cfg.epsilon_kl)},
          {"strict_relate", cfg.strict_relate}};
}

}  // namespace

json QuestionResultToJson(const QuestionResult& q) {
  json reports = json::array();
  for (const auto& r : q.reports) reports.push_back(ReportToJson(r));
  return {{"question_id", q.question_id},
          {"image_id", q.image_id},
          {"trace", TraceToJson(q.program, q.trace)},
          {"reports", std::move(reports)},
          {"temporal", q.temporal ? TemporalMatrixToJson(*q.temporal) : json()},
          {"targets", TargetsToJson(q.targets)},
          {"flagged_ops", q.flagged_ops}};
}

namespace {

json ErrorsToJson(const std::vector<LedgerEntry>& errors) {
  json out = json::array();
  for (const auto& e : errors) out.push_back({{"question_id", e.question_id}, {"message", e.message}});
  return out;
}

const char* kMethodNotes[] = {
    "category matching: exact match after token normalization (no synonym sets)",
    "dense attention grids are bilinearly resampled to map_size x map_size",
    "proposal attention is rasterized as weight/area density with exact pixel coverage",
    "per_kind_means: trace level = mean of defined step scores of that kind; corpus level = mean over questions of trace-level means",
};

}  // namespace

std::vector<ManifestEntry> EmitReport(const EvaluationResult& result, const RunConfig& cfg,
                                      const std::string& format, const std::string& out_dir,
                                      bool with_summary) {
  if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  std::map<std::string, std::string> files;  // relative path -> contents

  if (format == "json") {
    for (const auto& q : result.questions) {
      files["reports/" + q.question_id + ".json"] = QuestionResultToJson(q).dump(2) + "\n";
    }
  }
  if (format == "json" && with_summary) {
    json ids = json::array();
    for (const auto& q : result.questions) ids.push_back(q.question_id);
    json kinds = json::object();
    for (const auto& [source, means] : result.corpus_kind_means) {
      json m = json::object();
      for (const auto& [k, v] : means) m[std::string(OpKindName(k))] = RoundReal(v);
      kinds[source] = std::move(m);
    }
    json summary = {
        {"config", ConfigSummary(cfg)},
        {"questions", std::move(ids)},
        {"corpus_kind_means", std::move(kinds)},
        {"correlations", json::parse(CorrelationTablesToJson(result.correlations))},
        {"temporal_mean", TemporalMatrixToJson(result.temporal_mean)},
        {"accuracy", result.accuracy ? AccuracyStatsToJson(*result.accuracy) : json()},
        {"errors", ErrorsToJson(result.errors)},
        {"notes", kMethodNotes},
    };
    files["summary.json"] = summary.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string corpus = CorpusCsvHeader();
    for (const auto& q : result.questions) {
      for (const auto& r : q.reports) corpus += ReportCsvRows(r);
    }
    files["corpus.csv"] = corpus;
  }
  if (format == "csv" && with_summary) {
    files["correlation.csv"] = CorrelationTablesToCsv(result.correlations);
    files["temporal_mean.csv"] = TemporalMatrixToCsv(result.temporal_mean);
    std::string errors = "question_id,message\n";
    for (const auto& e : result.errors) {
      errors += CsvField(e.question_id) + "," + CsvField(e.message) + "\n";
    }
    files["errors.csv"] = errors;
  }

  std::vector<ManifestEntry> manifest;
  json listing = json::array();
  for (const auto& [rel, contents] : files) {
    WriteFile((fs::path(out_dir) / rel).string(), contents);
    manifest.push_back({rel, Sha256Hex(contents)});
    listing.push_back({{"path", rel}, {"sha256", manifest.back().sha256}});
  }
  WriteFile((fs::path(out_dir) / "manifest.json").string(),
            json({{"files", std::move(listing)}}).dump(2) + "\n");
  return manifest;
}

}  // namespace reasonattn
