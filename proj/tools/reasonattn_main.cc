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
// Command-line front end: one subcommand per pipeline stage plus `report`
// for the whole run. Exit codes: 0 success, 1 per-question errors, 2
// configuration or schema failure.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reasonattn/analytics.h"
#include "reasonattn/io.h"
#include "reasonattn/pipeline.h"
#include "reasonattn/report_io.h"
#include "reasonattn/synth.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace reasonattn {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitQuestionErrors = 1;
constexpr int kExitConfig = 2;

// Raw flag values; applied on top of --config so that flags win.
struct Flags {
  std::string config;
  std::map<std::string, std::string> paths;
  int k = kDefaultFallbackK;
  double sigma = kDefaultSigma;
  int map_size = kDefaultMapSize;
  std::string bins;
  double phi = kDefaultPhi;
  long schedule_length = kDefaultScheduleLength;
  int jobs = 0;
  std::string format = "json";
  bool strict_relate = false;
  std::uint64_t seed = 7;
  int count = 10;
  std::vector<CLI::Option*> given;
  std::map<std::string, CLI::Option*> options;
};

void AddPath(CLI::App* app, Flags& f, const std::string& name, const std::string& help) {
  f.options["path:" + name] = app->add_option("--" + name, f.paths[name], help);
}

void AddCommon(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "Flat JSON config; flags override its keys");
  f.options["k"] = app->add_option("--k", f.k, "Top-k co-occurring categories for missing referents");
  f.options["sigma"] = app->add_option("--sigma", f.sigma, "Fixation Gaussian sigma in map pixels");
  f.options["map_size"] = app->add_option("--map-size", f.map_size, "Evaluation map resolution");
  f.options["bins"] = app->add_option("--bins", f.bins, "Temporal bins, e.g. 0-1000,1000-2000");
  f.options["phi"] = app->add_option("--phi", f.phi, "Operation-loss weight");
  f.options["C"] = app->add_option("--C", f.schedule_length, "Theta schedule length");
  f.options["jobs"] = app->add_option("--jobs", f.jobs, "Worker threads (0: all cores)");
  f.options["format"] =
      app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  f.options["strict_relate"] =
      app->add_flag("--strict-relate", f.strict_relate, "Edge-filtered relate (non-canonical)");
  f.options["seed"] = app->add_option("--seed", f.seed, "RNG seed (synth)");
  f.options["count"] = app->add_option("--count", f.count, "Number of questions (synth)");
  AddPath(app, f, "scenes", "Directory of scene-graph JSON files");
  AddPath(app, f, "questions", "Questions JSON");
  AddPath(app, f, "fixations", "Fixation CSV");
  AddPath(app, f, "maps", "Directory of per-question attention maps");
  AddPath(app, f, "outcomes", "Outcomes CSV");
  AddPath(app, f, "cooccurrence", "Co-occurrence table JSON");
  AddPath(app, f, "proposals", "Directory of per-question proposal boxes");
  AddPath(app, f, "op-map", "Raw-operation mapping table JSON");
  AddPath(app, f, "traces", "Directory of precomputed traces");
  AddPath(app, f, "reports", "Directory of per-question reports (analyze)");
  AddPath(app, f, "out", "Output directory or file");
}

bool Given(const Flags& f, const std::string& key) {
  auto it = f.options.find(key);
  return it != f.options.end() && it->second->count() > 0;
}

RunConfig ResolveConfig(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = ConfigFromJson(ReadFile(f.config));
  auto path = [&](const std::string& flag, std::string& field) {
    if (Given(f, "path:" + flag)) field = f.paths.at(flag);
  };
  path("scenes", cfg.scenes);
  path("questions", cfg.questions);
  path("fixations", cfg.fixations);
  path("maps", cfg.maps);
  path("outcomes", cfg.outcomes);
  path("cooccurrence", cfg.cooccurrence);
  path("proposals", cfg.proposals);
  path("op-map", cfg.op_map);
  path("traces", cfg.traces);
  path("out", cfg.out);
  if (Given(f, "k")) cfg.k = f.k;
  if (Given(f, "sigma")) cfg.sigma = f.sigma;
  if (Given(f, "map_size")) cfg.map_size = f.map_size;
  if (Given(f, "bins")) {
    try {
      cfg.temporal_bins = ParseTemporalBins(f.bins);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (Given(f, "phi")) cfg.phi = f.phi;
  if (Given(f, "C")) cfg.schedule_length = f.schedule_length;
  if (Given(f, "jobs")) cfg.jobs = f.jobs;
  if (Given(f, "format")) cfg.format = f.format;
  if (Given(f, "strict_relate")) cfg.strict_relate = f.strict_relate;
  ValidateConfig(cfg);
  return cfg;
}

void RequireOut(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("--out is required");
}

int ReportLedger(const std::vector<LedgerEntry>& errors) {
  for (const auto& e : errors) {
    std::cerr << "error: " << (e.question_id.empty() ? "-" : e.question_id) << ": " << e.message
              << "\n";
  }
  return errors.empty() ? kExitOk : kExitQuestionErrors;
}

int RunCooccur(const RunConfig& cfg) {
  if (cfg.scenes.empty()) throw ConfigError("--scenes is required");
  std::vector<LedgerEntry> errors;
  CooccurrenceTable::Builder builder;
  std::size_t loaded = 0;
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(cfg.scenes, ec)) throw IoError("cannot read directory '" + cfg.scenes + "'", cfg.scenes);
  for (const auto& entry : fs::directory_iterator(cfg.scenes)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    try {
      builder.Add(ParseSceneGraph(ReadFile(p.string())));
      ++loaded;
    } catch (const Error& e) {
      errors.push_back({"", p.string() + ": " + e.what()});
    }
  }
  if (loaded == 0) throw ConfigError("no readable scene graphs in '" + cfg.scenes + "'");
  const std::string out = builder.Build().ToJson() + "\n";
  if (cfg.out.empty()) {
    std::cout << out;
  } else {
    WriteFile(cfg.out, out);
  }
  return ReportLedger(errors);
}

int RunTrace(const RunConfig& cfg) {
  RequireOut(cfg);
  RunConfig load = cfg;
  load.fixations.clear();
  load.maps.clear();
  load.proposals.clear();
  const Corpus corpus = LoadCorpus(load);
  EvaluationResult result = RunEvaluation(corpus, load);
  for (const auto& q : result.questions) {
    json doc = TraceToJson(q.program, q.trace);
    doc["question_id"] = q.question_id;
    doc["image_id"] = q.image_id;
    doc["flagged_ops"] = q.flagged_ops;
    WriteFile((fs::path(cfg.out) / (q.question_id + ".json")).string(), doc.dump(2) + "\n");
  }
  return ReportLedger(result.errors);
}

int RunFixmap(const RunConfig& cfg) {
  RequireOut(cfg);
  if (cfg.fixations.empty()) throw ConfigError("--fixations is required");
  RunConfig load = cfg;
  load.maps.clear();
  load.proposals.clear();
  const Corpus corpus = LoadCorpus(load);
  std::map<std::string, std::vector<Fixation>> by_question;
  for (const auto& f : corpus.fixations) by_question[f.question_id].push_back(f);
  std::vector<LedgerEntry> errors = corpus.load_errors;
  const std::string ext = cfg.format == "csv" ? ".csv" : ".json";
  auto write = [&](const fs::path& p, const Grid& g) {
    WriteFile(p.string() + ext, cfg.format == "csv" ? GridToCsv(g) : GridToJson(g) + "\n");
  };
  for (const auto& q : corpus.questions) {
    auto it = by_question.find(q.question_id);
    if (it == by_question.end()) continue;
    auto scene = corpus.scenes.find(q.image_id);
    if (scene == corpus.scenes.end()) {
      errors.push_back({q.question_id, "no scene graph for image '" + q.image_id + "'"});
      continue;
    }
    const ImageSize image = ImageSizeOf(scene->second);
    std::vector<Fixation> correct, incorrect;
    for (const auto& f : it->second) (f.is_correct ? correct : incorrect).push_back(f);
    const fs::path dir = fs::path(cfg.out) / q.question_id;
    auto emit = [&](std::string_view source, const std::vector<Fixation>& fs) {
      if (fs.empty()) return;
      write(dir / std::string(source), FixationsToMap(fs, image, cfg.map_size, cfg.sigma).grid);
    };
    emit(kHumanTotal, it->second);
    emit(kHumanCorrect, correct);
    emit(kHumanIncorrect, incorrect);
    const TemporalSlices slices = SliceFixationsTemporal(it->second, cfg.temporal_bins);
    for (std::size_t b = 0; b < slices.bins.size(); ++b) {
      write(dir / "bins" / ("bin" + std::to_string(b)),
            FixationsToMap(slices.bins[b], image, cfg.map_size, cfg.sigma).grid);
    }
    if (slices.dropped > 0) {
      std::cerr << "note: " << q.question_id << ": " << slices.dropped
                << " fixation(s) outside all temporal bins\n";
    }
  }
  return ReportLedger(errors);
}

int RunScoreOrReport(const RunConfig& cfg, bool with_summary) {
  RequireOut(cfg);
  const Corpus corpus = LoadCorpus(cfg);
  const EvaluationResult result = RunEvaluation(corpus, cfg);
  EmitReport(result, cfg, cfg.format, cfg.out, with_summary);
  return ReportLedger(result.errors);
}

int RunTargets(const RunConfig& cfg) {
  RequireOut(cfg);
  if (cfg.proposals.empty()) throw ConfigError("--proposals is required");
  RunConfig load = cfg;
  load.fixations.clear();
  load.maps.clear();
  const Corpus corpus = LoadCorpus(load);
  const EvaluationResult result = RunEvaluation(corpus, load);
  for (const auto& q : result.questions) {
    if (q.targets.empty()) continue;
    WriteFile((fs::path(cfg.out) / (q.question_id + ".json")).string(),
              TargetsToJson(q.targets).dump(2) + "\n");
  }
  return ReportLedger(result.errors);
}

int RunAnalyze(const RunConfig& cfg, const std::string& reports_dir) {
  RequireOut(cfg);
  if (reports_dir.empty()) throw ConfigError("--reports is required");
  std::error_code ec;
  if (!fs::is_directory(reports_dir, ec)) {
    throw IoError("cannot read directory '" + reports_dir + "'", reports_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(reports_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<AirEReport> reports;
  std::vector<TemporalMatrix> temporal;
  std::vector<LedgerEntry> errors;
  for (const auto& p : files) {
    try {
      const json doc = json::parse(ReadFile(p.string()));
      for (const json& r : doc.at("reports")) reports.push_back(ReportFromJson(r));
      if (!doc.at("temporal").is_null()) temporal.push_back(TemporalMatrixFromJson(doc.at("temporal")));
    } catch (const std::exception& e) {
      errors.push_back({p.stem().string(), e.what()});
    }
  }
  std::vector<QuestionOutcome> outcomes;
  if (!cfg.outcomes.empty()) {
    try {
      outcomes = ParseOutcomesCsv(ReadFile(cfg.outcomes));
    } catch (const ParseError& e) {
      throw ConfigError(cfg.outcomes + ": " + e.what());
    }
  }
  std::optional<AccuracyStats> accuracy;
  if (!cfg.fixations.empty()) {
    std::vector<Fixation> fixations;
    try {
      fixations = ParseFixationCsv(ReadFile(cfg.fixations));
    } catch (const ParseError& e) {
      throw ConfigError(cfg.fixations + ": " + e.what());
    }
    const auto trials = TrialsFromFixations(fixations);
    const auto human = HumanOutcomesFromTrials(trials);
    accuracy = AnswerAccuracyStats(human, trials);
    std::set<std::string> explicit_sources;
    for (const auto& o : outcomes) explicit_sources.insert(o.source);
    for (std::string_view source : {kHumanCorrect, kHumanIncorrect, kHumanTotal}) {
      if (explicit_sources.contains(std::string(source))) continue;
      for (QuestionOutcome o : human) {
        o.source = std::string(source);
        outcomes.push_back(o);
      }
    }
  }
  const auto tables = CorrelateBySource(reports, outcomes);
  const fs::path out(cfg.out);
  WriteFile((out / "correlation.csv").string(), CorrelationTablesToCsv(tables));
  WriteFile((out / "correlation.json").string(), CorrelationTablesToJson(tables) + "\n");
  WriteFile((out / "temporal_mean.csv").string(), TemporalMatrixToCsv(MeanTemporalMatrix(temporal)));
  if (accuracy) {
    WriteFile((out / "accuracy.json").string(), AccuracyStatsToJson(*accuracy).dump(2) + "\n");
  }
  return ReportLedger(errors);
}

int RunSynth(const RunConfig& cfg, const Flags& f) {
  RequireOut(cfg);
  SynthOptions opt;
  opt.seed = f.seed;
  opt.questions = f.count;
  if (opt.questions < 0) throw ConfigError("--count must be >= 0");
  const SynthCorpus synth = GenerateSynthCorpus(opt);
  const fs::path root = fs::absolute(cfg.out);
  const RunConfig written = WriteCorpus(synth.corpus, root.string());
  json config = {{"scenes", written.scenes},     {"questions", written.questions},
                 {"fixations", written.fixations}, {"maps", written.maps},
                 {"outcomes", written.outcomes}, {"cooccurrence", written.cooccurrence},
                 {"proposals", written.proposals}};
  WriteFile((root / "config.json").string(), config.dump(2) + "\n");
  json planted = json::object();
  for (const auto& [qid, rois] : synth.final_rois) planted[qid] = rois;
  WriteFile((root / "planted_final_rois.json").string(), planted.dump(1) + "\n");
  std::cout << "wrote " << opt.questions << " synthetic questions to " << root.string() << "\n";
  return kExitOk;
}

}  // namespace
}  // namespace reasonattn

int main(int argc, char** argv) {
  using namespace reasonattn;
  CLI::App app{"Reasoning-aware attention evaluation toolkit"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"cooccur", "Build the category co-occurrence table from scene graphs"},
      {"trace", "Execute programs over scene graphs and write ROI traces"},
      {"fixmap", "Turn fixations into human attention maps (total/correct/incorrect, per bin)"},
      {"score", "Score attention maps against traces (per-question reports)"},
      {"targets", "Derive per-step ground-truth attention over proposals"},
      {"analyze", "Correlate reports with task performance; temporal and accuracy summaries"},
      {"synth", "Generate the synthetic fixture corpus"},
      {"report", "Run the whole pipeline and emit reports with a manifest"},
  };
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    AddCommon(sub, flags[c.name]);
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      const Flags& f = flags.at(name);
      const RunConfig cfg = ResolveConfig(f);
      if (name == "cooccur") return RunCooccur(cfg);
      if (name == "trace") return RunTrace(cfg);
      if (name == "fixmap") return RunFixmap(cfg);
      if (name == "score") return RunScoreOrReport(cfg, false);
      if (name == "report") return RunScoreOrReport(cfg, true);
      if (name == "targets") return RunTargets(cfg);
      if (name == "analyze") return RunAnalyze(cfg, f.paths.at("reports"));
      if (name == "synth") return RunSynth(cfg, f);
    }
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
