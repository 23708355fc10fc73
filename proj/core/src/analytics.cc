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
#include "reasonattn/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "reasonattn/csv.h"
#include "reasonattn/error.h"

namespace reasonattn {
namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double IncompleteBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

std::pair<double, double> MeanAndPopulationSd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                std::to_string(ys.size()) + ")");
  }
  if (xs.size() < kMinCorrelationPairs) {
    throw Error("pearson: need at least 3 pairs");
  }
  const double n = static_cast<double>(xs.size());
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0L || syy == 0.0L) {
    throw Error("pearson: correlation undefined for constant input");
  }
  return static_cast<double>(std::clamp(sxy / std::sqrt(sxx * syy), -1.0L, 1.0L));
}

double StudentTCdf(double t, double dof) {
  if (!(dof > 0.0)) throw Error("t distribution: degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * IncompleteBeta(0.5 * dof, 0.5, dof / (dof + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

double PearsonPValue(double r, std::size_t n) {
  if (n < kMinCorrelationPairs) throw Error("pearson p-value: need at least 3 pairs");
  const double dof = static_cast<double>(n) - 2.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  return IncompleteBeta(0.5 * dof, 0.5, dof / (dof + t * t));
}

CorrelationTable CorrelateAirEWithPerformance(std::span<const AirEReport> reports,
                                              std::span<const QuestionOutcome> outcomes) {
  CorrelationTable table;
  if (!reports.empty()) table.source = reports.front().source;
  std::map<std::string, double> performance;
  for (const auto& o : outcomes) {
    if (!(o.performance >= 0.0 && o.performance <= 1.0)) {
      throw ValidationError("outcome for '" + o.question_id + "' outside [0, 1]",
                            o.question_id);
    }
    performance[o.question_id] = o.performance;
  }
  std::vector<const AirEReport*> joined;
  for (const auto& r : reports) {
    if (performance.contains(r.question_id)) joined.push_back(&r);
  }
  std::sort(joined.begin(), joined.end(), [](const auto* a, const auto* b) {
    return a->question_id < b->question_id;
  });

  for (OpKind kind : kAllOpKinds) {
    std::vector<double> xs, ys;
    for (const AirEReport* r : joined) {
      auto it = r->per_kind_means.find(kind);
      if (it == r->per_kind_means.end()) continue;
      xs.push_back(it->second);
      ys.push_back(performance.at(r->question_id));
    }
    CorrelationEntry entry;
    entry.n = xs.size();
    if (xs.size() >= kMinCorrelationPairs) {
      try {
        entry.r = Pearson(xs, ys);
        entry.p = PearsonPValue(*entry.r, xs.size());
        entry.significant = *entry.p < kSignificanceLevel;
        entry.insufficient = false;
      } catch (const Error&) {
        entry.r.reset();
        entry.p.reset();
      }
    }
    table.per_kind[kind] = entry;
  }
  return table;
}

std::vector<CorrelationTable> CorrelateBySource(std::span<const AirEReport> reports,
                                                std::span<const QuestionOutcome> outcomes) {
  std::map<std::string, std::vector<AirEReport>> by_source;
  for (const auto& r : reports) by_source[r.source].push_back(r);
  std::vector<CorrelationTable> out;
  for (const auto& [source, rs] : by_source) {
    std::vector<QuestionOutcome> matching;
    for (const auto& o : outcomes) {
      if (o.source == source) matching.push_back(o);
    }
    CorrelationTable t = CorrelateAirEWithPerformance(rs, matching);
    t.source = source;
    out.push_back(std::move(t));
  }
  return out;
}

std::string CorrelationTablesToCsv(std::span<const CorrelationTable> tables) {
  std::ostringstream out;
  out << "source";
  for (OpKind k : kAllOpKinds) out << ',' << OpKindName(k);
  out << '\n';
  for (const auto& t : tables) {
    out << CsvField(t.source);
    for (OpKind k : kAllOpKinds) {
      out << ',';
      auto it = t.per_kind.find(k);
      if (it == t.per_kind.end() || it->second.insufficient) {
        out << "n/a";
      } else {
        out << FormatReal(*it->second.r) << (it->second.significant ? "*" : "");
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string CorrelationTablesToJson(std::span<const CorrelationTable> tables) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : tables) {
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto& [k, e] : t.per_kind) {
      kinds[std::string(OpKindName(k))] = {
          {"n", e.n},
          {"r", e.r ? nlohmann::json(RoundReal(*e.r)) : nlohmann::json()},
          {"p", e.p ? nlohmann::json(RoundReal(*e.p)) : nlohmann::json()},
          {"significant", e.significant},
          {"insufficient", e.insufficient},
      };
    }
    doc.push_back({{"source", t.source}, {"kinds", std::move(kinds)}});
  }
  return doc.dump(2);
}

std::vector<Trial> TrialsFromFixations(std::span<const Fixation> fixations) {
  std::map<std::pair<std::string, std::string>, Trial> trials;
  for (const auto& f : fixations) {
    auto [it, inserted] = trials.try_emplace({f.question_id, f.participant_id});
    Trial& t = it->second;
    if (inserted) {
      t.question_id = f.question_id;
      t.participant_id = f.participant_id;
      t.is_correct = f.is_correct;
    } else if (t.is_correct != f.is_correct) {
      throw ValidationError("fixations of participant '" + f.participant_id +
                                "' on question '" + f.question_id +
                                "' disagree on correctness",
                            f.question_id);
    }
    ++t.fixation_count;
  }
  std::vector<Trial> out;
  for (auto& [key, t] : trials) out.push_back(std::move(t));
  return out;
}

std::vector<QuestionOutcome> HumanOutcomesFromTrials(std::span<const Trial> trials) {
  std::map<std::string, std::pair<int, int>> tally;  // correct, total
  for (const auto& t : trials) {
    auto& [correct, total] = tally[t.question_id];
    correct += t.is_correct ? 1 : 0;
    ++total;
  }
  std::vector<QuestionOutcome> out;
  for (const auto& [qid, ct] : tally) {
    out.push_back({qid, std::string(kHumanTotal),
                   static_cast<double>(ct.first) / ct.second, ct.second});
  }
  return out;
}

AccuracyStats AnswerAccuracyStats(std::span<const QuestionOutcome> outcomes,
                                  std::span<const Trial> trials) {
  AccuracyStats s;
  std::vector<double> acc;
  for (const auto& o : outcomes) {
    acc.push_back(o.performance);
    const auto bin = static_cast<std::size_t>(
        std::clamp(std::floor(o.performance * 10.0), 0.0, 9.0));
    ++s.histogram[bin];
  }
  s.questions = acc.size();
  std::tie(s.mean, s.sd) = MeanAndPopulationSd(acc);

  std::vector<double> fc, fi;
  for (const auto& t : trials) {
    (t.is_correct ? fc : fi).push_back(static_cast<double>(t.fixation_count));
  }
  s.trials_correct = fc.size();
  s.trials_incorrect = fi.size();
  std::tie(s.fixations_correct_mean, s.fixations_correct_sd) = MeanAndPopulationSd(fc);
  std::tie(s.fixations_incorrect_mean, s.fixations_incorrect_sd) = MeanAndPopulationSd(fi);
  return s;
}

TemporalMatrix MeanTemporalMatrix(std::span<const TemporalMatrix> matrices) {
  std::size_t bins = 0, steps = 0;
  for (const auto& m : matrices) {
    bins = std::max(bins, m.size());
    for (const auto& row : m) steps = std::max(steps, row.size());
  }
  std::vector<std::vector<std::pair<double, int>>> acc(
      bins, std::vector<std::pair<double, int>>(steps, {0.0, 0}));
  for (const auto& m : matrices) {
    for (std::size_t b = 0; b < m.size(); ++b) {
      for (std::size_t s = 0; s < m[b].size(); ++s) {
        if (m[b][s]) {
          acc[b][s].first += *m[b][s];
          ++acc[b][s].second;
        }
      }
    }
  }
  TemporalMatrix out(bins, std::vector<std::optional<double>>(steps));
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t s = 0; s < steps; ++s) {
      if (acc[b][s].second > 0) out[b][s] = acc[b][s].first / acc[b][s].second;
    }
  }
  return out;
}

}  // namespace reasonattn
