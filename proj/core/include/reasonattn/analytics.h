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
#ifndef REASONATTN_ANALYTICS_H_
#define REASONATTN_ANALYTICS_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reasonattn/aire.h"
#include "reasonattn/attention_map.h"
#include "reasonattn/program.h"

namespace reasonattn {

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr std::size_t kMinCorrelationPairs = 3;

// Sample Pearson correlation. Throws Error on length mismatch, fewer than 3
// points, or a constant argument.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// Student t CDF via the regularized incomplete beta function.
double StudentTCdf(double t, double dof);
// Two-sided p-value of the t-test for a Pearson r over n pairs.
double PearsonPValue(double r, std::size_t n);

struct QuestionOutcome {
  std::string question_id;
  std::string source;
  // Human: fraction of correct answers. Machine: score of the correct answer.
  double performance = 0.0;
  std::optional<int> n_participants;
};

struct CorrelationEntry {
  std::size_t n = 0;
  std::optional<double> r;
  std::optional<double> p;
  bool significant = false;
  // Fewer than kMinCorrelationPairs pairs, or a constant side.
  bool insufficient = true;
};

struct CorrelationTable {
  std::string source;
  std::map<OpKind, CorrelationEntry> per_kind;
};

// Pairs each question's per-kind mean AiR-E with its performance (joined on
// question_id, in sorted order). Kinds absent from a question are skipped.
CorrelationTable CorrelateAirEWithPerformance(std::span<const AirEReport> reports,
                                              std::span<const QuestionOutcome> outcomes);

// One table per distinct report source; outcomes are matched on
// (question_id, source).
std::vector<CorrelationTable> CorrelateBySource(std::span<const AirEReport> reports,
                                                std::span<const QuestionOutcome> outcomes);

// Rows = sources, columns = the 8 kinds; significant r marked with '*',
// insufficient cells written as "n/a".
std::string CorrelationTablesToCsv(std::span<const CorrelationTable> tables);
std::string CorrelationTablesToJson(std::span<const CorrelationTable> tables);

// One participant answering one question.
struct Trial {
  std::string question_id;
  std::string participant_id;
  bool is_correct = false;
  std::size_t fixation_count = 0;
};

// Groups fixations by (question_id, participant_id), sorted.
std::vector<Trial> TrialsFromFixations(std::span<const Fixation> fixations);

// Per-question fraction of correct trials, source human-total.
std::vector<QuestionOutcome> HumanOutcomesFromTrials(std::span<const Trial> trials);

struct AccuracyStats {
  std::size_t questions = 0;
  double mean = 0.0;
  double sd = 0.0;  // population
  std::array<std::size_t, 10> histogram{};
  double fixations_correct_mean = 0.0;
  double fixations_correct_sd = 0.0;
  double fixations_incorrect_mean = 0.0;
  double fixations_incorrect_sd = 0.0;
  std::size_t trials_correct = 0;
  std::size_t trials_incorrect = 0;
};

AccuracyStats AnswerAccuracyStats(std::span<const QuestionOutcome> outcomes,
                                  std::span<const Trial> trials);

// Element-wise mean over questions of (bin, step) entries, skipping undefined
// ones; the step axis is as long as the longest program.
TemporalMatrix MeanTemporalMatrix(std::span<const TemporalMatrix> matrices);

}  // namespace reasonattn

#endif  // REASONATTN_ANALYTICS_H_
