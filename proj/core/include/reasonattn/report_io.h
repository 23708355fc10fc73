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
#ifndef REASONATTN_REPORT_IO_H_
#define REASONATTN_REPORT_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reasonattn/aire.h"
#include "reasonattn/analytics.h"
#include "reasonattn/program.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/supervision.h"

namespace reasonattn {

// All reals pass through RoundReal; undefined values are null. nlohmann
// objects keep keys sorted, so dumps are byte-stable.

nlohmann::json TraceToJson(const ReasoningProgram& program, const RoiTrace& trace);
// Reads the "steps" array written by TraceToJson.
RoiTrace TraceFromJson(const nlohmann::json& doc);

nlohmann::json StepScoreToJson(const AirEStepScore& s);
nlohmann::json ReportToJson(const AirEReport& report);
// Inverse of ReportToJson (notes and per-group values included).
AirEReport ReportFromJson(const nlohmann::json& doc);
nlohmann::json TemporalMatrixToJson(const TemporalMatrix& m);
TemporalMatrix TemporalMatrixFromJson(const nlohmann::json& doc);
nlohmann::json TargetsToJson(std::span<const TargetAttention> targets);
nlohmann::json AccuracyStatsToJson(const AccuracyStats& s);

// Header: question_id,source,step,kind,score,fallback_used
std::string CorpusCsvHeader();
std::string ReportCsvRows(const AirEReport& report);

std::string TemporalMatrixToCsv(const TemporalMatrix& m);

// question_id,source,performance[,n_participants]
std::vector<QuestionOutcome> ParseOutcomesCsv(std::string_view text);
std::string OutcomesToCsv(std::span<const QuestionOutcome> outcomes);

}  // namespace reasonattn

#endif  // REASONATTN_REPORT_IO_H_
