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

#include <sstream>

#include "reasonattn/csv.h"
#include "reasonattn/error.h"
#include "reasonattn/tokens.h"

namespace reasonattn {

using nlohmann::json;

namespace {

json OptionalReal(const std::optional<double>& v) {
  return v ? json(RoundReal(*v)) : json();
}

}  // namespace

json TraceToJson(const ReasoningProgram& program, const RoiTrace& trace) {
  json steps = json::array();
  for (std::size_t i = 0; i < trace.sets.size(); ++i) {
    const RoiSet& rs = trace.sets[i];
    json groups = json::array();
    for (const auto& g : rs.groups) groups.push_back(json(g));
    steps.push_back({{"step", rs.step},
                     {"kind", std::string(OpKindName(program.steps.at(i).kind))},
                     {"groups", std::move(groups)},
                     {"fallback_used", rs.fallback_used}});
  }
  return {{"program", SerializeProgram(program)}, {"steps", std::move(steps)}};
}

RoiTrace TraceFromJson(const json& doc) {
  RoiTrace trace;
  try {
    for (const json& s : doc.at("steps")) {
      RoiSet rs;
      rs.step = s.at("step").get<int>();
      rs.fallback_used = s.value("fallback_used", false);
      rs.relate = s.value("kind", std::string()) == OpKindName(OpKind::kRelate);
      for (const json& g : s.at("groups")) {
        rs.groups.push_back(g.get<ObjectIdSet>());
      }
      trace.sets.push_back(std::move(rs));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("trace json: ") + e.what(), 0, 0);
  }
  return trace;
}

json StepScoreToJson(const AirEStepScore& s) {
  json groups = json::array();
  for (const auto& g : s.per_group) groups.push_back(OptionalReal(g));
  return {{"step", s.step},
          {"kind", std::string(OpKindName(s.kind))},
          {"per_group", std::move(groups)},
          {"score", OptionalReal(s.score)},
          {"fallback_used", s.fallback_used}};
}

json ReportToJson(const AirEReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) steps.push_back(StepScoreToJson(s));
  json kinds = json::object();
  for (const auto& [k, v] : report.per_kind_means) {
    kinds[std::string(OpKindName(k))] = RoundReal(v);
  }
  return {{"question_id", report.question_id},
          {"source", report.source},
          {"steps", std::move(steps)},
          {"per_kind_means", std::move(kinds)},
          {"per_kind_means_scope", "trace: mean of defined step scores per kind"},
          {"trace_mean", OptionalReal(report.TraceMean())},
          {"notes", report.notes}};
}

AirEReport ReportFromJson(const json& doc) {
  auto optional_real = [](const json& v) {
    return v.is_null() ? std::optional<double>() : std::optional<double>(v.get<double>());
  };
  auto kind_of = [](const std::string& name) {
    auto k = OpKindFromName(name);
    if (!k) throw ParseError("report json: unknown kind '" + name + "'", 0, 0);
    return *k;
  };
  AirEReport r;
  try {
    r.question_id = doc.at("question_id").get<std::string>();
    r.source = doc.at("source").get<std::string>();
    for (const json& s : doc.at("steps")) {
      AirEStepScore step;
      step.step = s.at("step").get<int>();
      step.kind = kind_of(s.at("kind").get<std::string>());
      for (const json& g : s.at("per_group")) step.per_group.push_back(optional_real(g));
      step.score = optional_real(s.at("score"));
      step.fallback_used = s.value("fallback_used", false);
      r.steps.push_back(std::move(step));
    }
    for (const auto& [name, v] : doc.at("per_kind_means").items()) {
      r.per_kind_means[kind_of(name)] = v.get<double>();
    }
    r.notes = doc.value("notes", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what(), 0, 0);
  }
  return r;
}

TemporalMatrix TemporalMatrixFromJson(const json& doc) {
  TemporalMatrix m;
  try {
    for (const json& row : doc) {
      std::vector<std::optional<double>> r;
      for (const json& v : row) {
        r.push_back(v.is_null() ? std::optional<double>() : v.get<double>());
      }
      m.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("temporal json: ") + e.what(), 0, 0);
  }
  return m;
}

json TemporalMatrixToJson(const TemporalMatrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(OptionalReal(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

json TargetsToJson(std::span<const TargetAttention> targets) {
  json out = json::array();
  for (const auto& t : targets) {
    json w = json::array();
    for (double v : t.weights) w.push_back(RoundReal(v));
    out.push_back({{"step", t.step},
                   {"weights", std::move(w)},
                   {"uniform_fallback", t.uniform_fallback}});
  }
  return out;
}

json AccuracyStatsToJson(const AccuracyStats& s) {
  return {{"questions", s.questions},
          {"mean", RoundReal(s.mean)},
          {"sd", RoundReal(s.sd)},
          {"histogram", s.histogram},
          {"fixations_correct_mean", RoundReal(s.fixations_correct_mean)},
          {"fixations_correct_sd", RoundReal(s.fixations_correct_sd)},
          {"fixations_incorrect_mean", RoundReal(s.fixations_incorrect_mean)},
          {"fixations_incorrect_sd", RoundReal(s.fixations_incorrect_sd)},
          {"trials_correct", s.trials_correct},
          {"trials_incorrect", s.trials_incorrect}};
}

std::string CorpusCsvHeader() {
  return "question_id,source,step,kind,score,fallback_used\n";
}

std::string ReportCsvRows(const AirEReport& report) {
  std::ostringstream out;
  for (const auto& s : report.steps) {
    out << CsvField(report.question_id) << ',' << CsvField(report.source) << ','
        << s.step << ',' << OpKindName(s.kind) << ','
        << (s.score ? FormatReal(*s.score) : std::string()) << ','
        << (s.fallback_used ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string TemporalMatrixToCsv(const TemporalMatrix& m) {
  std::ostringstream out;
  std::size_t steps = 0;
  for (const auto& row : m) steps = std::max(steps, row.size());
  out << "bin";
  for (std::size_t s = 0; s < steps; ++s) out << ",step" << s;
  out << '\n';
  for (std::size_t b = 0; b < m.size(); ++b) {
    out << b;
    for (std::size_t s = 0; s < steps; ++s) {
      out << ',';
      if (s < m[b].size() && m[b][s]) out << FormatReal(*m[b][s]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<QuestionOutcome> ParseOutcomesCsv(std::string_view text) {
  const auto rows = ReadCsv(text);
  if (rows.empty()) throw ParseError("outcomes csv: missing header", 1, 1);
  const auto& h = rows.front();
  if (h.size() < 3 || NormalizeToken(h[0]) != "question_id" ||
      NormalizeToken(h[1]) != "source" || NormalizeToken(h[2]) != "performance") {
    throw ParseError("outcomes csv: header must start with question_id,source,performance",
                     1, 1);
  }
  std::vector<QuestionOutcome> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != h.size()) throw ParseError("outcomes csv: wrong field count", i + 1, 1);
    QuestionOutcome o;
    o.question_id = r[0];
    o.source = NormalizeToken(r[1]);
    try {
      o.performance = ParseDouble(r[2], "performance");
      if (r.size() > 3 && !r[3].empty()) {
        o.n_participants = static_cast<int>(ParseDouble(r[3], "n_participants"));
      }
    } catch (const ParseError& e) {
      throw ParseError(std::string("outcomes csv: ") + e.what(), i + 1, 1);
    }
    if (!(o.performance >= 0.0 && o.performance <= 1.0)) {
      throw ParseError("outcomes csv: performance must lie in [0, 1]", i + 1, 1);
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::string OutcomesToCsv(std::span<const QuestionOutcome> outcomes) {
  std::ostringstream out;
  out << "question_id,source,performance,n_participants\n";
  for (const auto& o : outcomes) {
    out << CsvField(o.question_id) << ',' << CsvField(o.source) << ','
        << FormatReal(o.performance) << ','
        << (o.n_participants ? std::to_string(*o.n_participants) : std::string())
        << '\n';
  }
  return out.str();
}

}  // namespace reasonattn
