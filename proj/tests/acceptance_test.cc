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
// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "reasonattn/aire.h"
#include "reasonattn/analytics.h"
#include "reasonattn/attention_map.h"
#include "reasonattn/io.h"
#include "reasonattn/pipeline.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/supervision.h"
#include "reasonattn/synth.h"
#include "test_util.h"

namespace reasonattn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

AttentionMap Map(Grid g, std::string source = "machine") {
  return AttentionMap{std::move(g), std::move(source), false};
}

// 1. box_aire vs double-loop oracle; aggregation vs rule enumeration.
Outcome OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  const ImageSize image{640, 480};
  double worst = 0.0;
  int aggregate_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Grid raw = testing::RandomGrid(rng, 16, 16);
    const StandardizedMap sm = StandardizeMap(Map(raw));
    const BoundingBox box = testing::RandomBox(rng, image.width, image.height);
    worst = std::max(worst, std::abs(BoxAirE(sm, box, image) - testing::BoxAirEOracle(raw, box, image)));

    // Aggregation: random groups over six objects, every kind.
    SceneGraph g;
    g.width = image.width;
    g.height = image.height;
    for (int i = 0; i < 6; ++i) {
      const std::string id = "o" + std::to_string(i);
      g.objects[id] = SceneObject{id, "x", testing::RandomBox(rng, image.width, image.height), {}, {}};
    }
    std::uniform_int_distribution<int> groups(1, 3), members(0, 3), pick(0, 5);
    RoiSet rs;
    std::vector<std::vector<double>> scores;
    for (int k = groups(rng); k > 0; --k) {
      ObjectIdSet grp;
      for (int m = members(rng); m > 0; --m) grp.insert("o" + std::to_string(pick(rng)));
      std::vector<double> s;
      for (const auto& id : grp) s.push_back(BoxAirE(sm, g.object(id).box, image));
      rs.groups.push_back(grp);
      scores.push_back(s);
    }
    const OpKind kind = kAllOpKinds[trial % kNumOpKinds];
    if (AggregateStepAirE(sm, rs, kind, g).score != testing::AggregateOracle(kind, scores)) {
      ++aggregate_mismatch;
    }
  }
  const double secs = Seconds(start);
  return {worst <= 1e-9 && aggregate_mismatch == 0 && secs < 10.0,
          Fmt("max |box_aire - oracle| = %.3g, aggregate mismatches = %.0f, %.2f s", worst,
              aggregate_mismatch, secs)};
}

// 2. score_trace(a*m + b) == score_trace(m).
Outcome AffineInvariance() {
  std::mt19937_64 rng(2002);
  std::vector<SceneGraph> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back(testing::RandomScene(rng, 5, 640, 480));
  const CooccurrenceTable table = BuildCooccurrence(corpus);
  double worst = 0.0;
  int undefined_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SceneGraph& g = corpus[trial % corpus.size()];
    const ReasoningProgram p = testing::RandomProgram(rng, g, 6);
    const RoiTrace trace = DeriveRoiTrace(p, g, table);
    const Grid m = testing::RandomGrid(rng, 64, 64);
    const AirEReport base = ScoreTrace(Map(m), p, trace, g);
    for (double a : {0.1, 3.0, 10.0}) {
      for (double b : {0.0, 5.0}) {
        Grid t = m;
        for (double& v : t.values()) v = a * v + b;
        const AirEReport r = ScoreTrace(Map(t), p, trace, g);
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
          if (r.steps[i].score.has_value() != base.steps[i].score.has_value()) {
            ++undefined_mismatch;
          } else if (r.steps[i].score) {
            worst = std::max(worst, std::abs(*r.steps[i].score - *base.steps[i].score));
          }
        }
      }
    }
  }
  return {worst <= 1e-9 && undefined_mismatch == 0,
          Fmt("100 maps x 6 transforms, max step difference = %.3g", worst)};
}

// 3. Hand-derived ROI traces.
Outcome GoldenTraces() {
  const auto cases = testing::LoadGoldenCases();
  int ok = 0;
  bool fig1 = false, fallback20 = false;
  std::string failed;
  for (const auto& c : cases) {
    const RoiTrace t = DeriveRoiTrace(c.program, c.scene, c.table, {c.k, false});
    bool same = t.sets.size() == c.expected.size();
    for (std::size_t i = 0; same && i < c.expected.size(); ++i) {
      same = t.sets[i].groups == c.expected[i].groups &&
             t.sets[i].fallback_used == c.expected[i].fallback_used;
    }
    if (same) {
      ++ok;
    } else {
      failed += " " + c.name;
    }
    fig1 |= c.name.find("fig1") != std::string::npos && same;
    for (const auto& s : c.expected) fallback20 |= s.fallback_used && c.k == 20 && same;
  }
  return {cases.size() == 10 && ok == 10 && fig1 && fallback20,
          Fmt("%.0f/%.0f fixtures match", ok, static_cast<double>(cases.size())) +
              (failed.empty() ? "" : "; failed:" + failed)};
}

// 4. Correct maps beat incorrect maps on the synthetic corpus.
Outcome CorrectBeatsIncorrect() {
  const auto start = Clock::now();
  SynthOptions opt;
  opt.seed = 7;
  opt.questions = 200;
  const SynthCorpus synth = GenerateSynthCorpus(opt);
  RunConfig cfg;
  const EvaluationResult r = RunEvaluation(synth.corpus, cfg);
  int wins = 0, n = 0;
  double sum_c = 0, sum_i = 0;
  for (const auto& q : r.questions) {
    std::optional<double> c, i;
    for (const auto& rep : q.reports) {
      if (rep.source == kHumanCorrect) c = rep.TraceMean();
      if (rep.source == kHumanIncorrect) i = rep.TraceMean();
    }
    if (!c || !i) continue;
    ++n;
    wins += *c > *i;
    sum_c += *c;
    sum_i += *i;
  }
  const double secs = Seconds(start);
  const double frac = n ? static_cast<double>(wins) / n : 0.0;
  const double gap = n ? (sum_c - sum_i) / n : 0.0;
  return {n == 200 && r.errors.empty() && frac >= 0.95 && gap > 0.5 && secs < 60.0,
          Fmt("correct > incorrect in %.1f%% of %.0f questions, mean gap %.3f, %.1f s",
              100 * frac, n, gap, secs)};
}

// 5. Planted temporal drift gives a dominant diagonal.
Outcome TemporalDiagonal() {
  std::mt19937_64 rng(5005);
  int dominant = 0;
  for (int trial = 0; trial < 100; ++trial) {
    dominant += testing::DiagonallyDominant(testing::PlantedTemporalTrial(rng, kDefaultMapSize, 0.8));
  }
  return {dominant >= 95, Fmt("%.0f/100 trials strictly diagonally dominant", dominant)};
}

double ReferencePValue(double r, std::size_t n) {
  const double dof = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

// 6. Correlation machinery.
Outcome Correlation() {
  std::mt19937_64 rng(6006);
  std::normal_distribution<double> normal;
  // Planted: performance an increasing affine function of AiR-E per kind.
  std::vector<AirEReport> reports;
  std::vector<QuestionOutcome> outcomes;
  for (int i = 0; i < 200; ++i) {
    AirEReport r;
    r.question_id = "q" + std::to_string(10000 + i);
    r.source = "machine";
    const double x = normal(rng);
    for (OpKind k : kAllOpKinds) r.per_kind_means[k] = x;
    reports.push_back(r);
    outcomes.push_back({r.question_id, "machine", std::clamp(0.5 + 0.1 * x, 0.0, 1.0), {}});
  }
  // Keep the map affine: drop clamped questions.
  std::vector<AirEReport> kept;
  std::vector<QuestionOutcome> kept_out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (outcomes[i].performance > 0.0 && outcomes[i].performance < 1.0) {
      kept.push_back(reports[i]);
      kept_out.push_back(outcomes[i]);
    }
  }
  double worst_planted = 0.0;
  for (const auto& [k, e] : CorrelateAirEWithPerformance(kept, kept_out).per_kind) {
    worst_planted = std::max(worst_planted, e.r ? std::abs(*e.r - 1.0) : 1.0);
  }

  std::vector<double> perf;
  for (const auto& o : outcomes) perf.push_back(o.performance);
  int small = 0;
  double worst_p = 0.0;
  for (int shuffle = 0; shuffle < 100; ++shuffle) {
    std::shuffle(perf.begin(), perf.end(), rng);
    std::vector<QuestionOutcome> o;
    for (std::size_t i = 0; i < reports.size(); ++i) o.push_back({reports[i].question_id, "machine", perf[i], {}});
    const CorrelationEntry e = CorrelateAirEWithPerformance(reports, o).per_kind.at(OpKind::kSelect);
    if (e.r && std::abs(*e.r) < 0.2) ++small;
    if (e.r && e.p) worst_p = std::max(worst_p, std::abs(*e.p - ReferencePValue(*e.r, e.n)));
  }
  std::uniform_real_distribution<double> ur(-0.99, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double r = ur(rng);
    const std::size_t n = 3 + static_cast<std::size_t>(i % 300);
    worst_p = std::max(worst_p, std::abs(PearsonPValue(r, n) - ReferencePValue(r, n)));
  }
  return {worst_planted <= 1e-12 && small >= 95 && worst_p <= 1e-4,
          Fmt("planted |r - 1| <= %.3g, shuffled |r| < 0.2 in %.0f/100, max p error %.3g",
              worst_planted, small, worst_p)};
}

// 7. Supervision math.
Outcome Supervision() {
  const long c = kDefaultScheduleLength;
  const bool theta = ThetaSchedule(0, c) == 1.0 && ThetaSchedule(c, c) == 0.0 &&
                     ThetaSchedule(c / 2, c) == 0.5;
  std::mt19937_64 rng(7007);
  std::uniform_int_distribution<int> dim(2, 16);
  std::uniform_real_distribution<double> u(-3, 3), w(0, 1);
  double worst_kl = 0.0, worst_ce = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(rng);
    std::vector<double> z(n), t(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) z[i] = u(rng), t[i] = w(rng), sum += t[i];
    for (double& v : t) v /= sum;
    const LossAndGradient kl = KlAttentionLoss(t, z);
    worst_kl = std::max(worst_kl, testing::MaxGradientError(
                                      [&](const std::vector<double>& x) { return KlAttentionLoss(t, x).loss; }, z, kl.grad));
    std::vector<double> ops(kNumOpKinds);
    for (double& v : ops) v = u(rng);
    const OperationLabel label{0, kAllOpKinds[trial % kNumOpKinds]};
    const LossAndGradient ce = CeOperationLoss(label, ops);
    worst_ce = std::max(worst_ce, testing::MaxGradientError(
                                      [&](const std::vector<double>& x) { return CeOperationLoss(label, x).loss; }, ops, ce.grad));
  }

  const json cases = json::parse(ReadFile(testing::FixturePath("target_attention.json")));
  double worst_target = 0.0;
  for (const json& cs : cases) {
    SceneGraph g;
    g.width = g.height = 100;
    for (const auto& [id, b] : cs.at("rois").items()) g.objects[id] = SceneObject{id, "x", {b[0], b[1], b[2], b[3]}, {}, {}};
    RoiSet rs;
    for (const json& grp : cs.at("groups")) rs.groups.push_back(grp.get<ObjectIdSet>());
    std::vector<BoundingBox> props;
    for (const json& b : cs.at("proposals")) props.push_back({b[0], b[1], b[2], b[3]});
    const TargetAttention ta = DeriveTargetAttention(rs, props, g);
    const auto want = cs.at("expected").get<std::vector<double>>();
    double total = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      worst_target = std::max(worst_target, std::abs(ta.weights.at(i) - want[i]));
      total += ta.weights[i];
    }
    worst_target = std::max(worst_target, std::abs(total - 1.0));
  }
  return {theta && worst_kl < 1e-4 && worst_ce < 1e-4 && cases.size() == 5 && worst_target <= 1e-9,
          std::string(theta ? "theta exact" : "theta wrong") +
              Fmt(", KL grad rel err %.2g, CE grad rel err %.2g, target err %.2g", worst_kl,
                  worst_ce, worst_target)};
}

// 8. Fixation pipeline.
Outcome FixationPipeline() {
  Fixation f;
  f.x = 320;
  f.y = 240;
  f.end_ms = 200;
  const std::vector<Fixation> one = {f};
  const AttentionMap m = FixationsToMap(one, {640, 480});
  int pr = 0, pc = 0;
  for (int r = 0; r < m.grid.rows(); ++r)
    for (int c = 0; c < m.grid.cols(); ++c)
      if (m.grid.at(r, c) > m.grid.at(pr, pc)) pr = r, pc = c;
  const bool peak = std::abs(pr - 128) <= 1 && std::abs(pc - 128) <= 1 && m.grid.at(pr, pc) == 1.0;

  std::mt19937_64 rng(8008);
  bool pearson = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Grid a = testing::RandomGrid(rng, 32, 32);
    Grid b = a;
    for (double& v : b.values()) v = 1.0 - v;
    pearson &= MapPearson(Map(a), Map(a)) == 1.0 && MapPearson(Map(a), Map(b)) == -1.0;
  }

  std::uniform_real_distribution<double> ux(160, 480), uy(120, 360);
  std::vector<Fixation> many;
  for (int i = 0; i < 50; ++i) {
    Fixation g = f;
    g.x = ux(rng);
    g.y = uy(rng);
    many.push_back(g);
  }
  const Grid density = FixationDensity(many, {640, 480});
  const double rel = std::abs(density.Sum() - static_cast<double>(many.size())) / many.size();
  return {peak && pearson && rel <= 1e-3,
          Fmt("peak at (%.0f, %.0f) value %.3g, mass rel err %.2g", pr, pc, m.grid.at(pr, pc),
              rel) +
              (pearson ? ", pearson self/complement exact" : ", pearson not exact")};
}

// 9. Byte-identical manifests across runs and worker counts.
Outcome Determinism() {
  testing::TempDir dir;
  SynthOptions opt;
  opt.questions = 10;
  const RunConfig written = WriteCorpus(GenerateSynthCorpus(opt).corpus, (dir.path() / "corpus").string());
  std::vector<std::string> manifests;
  for (int jobs : {1, 1, 8, 8}) {
    RunConfig cfg = written;
    cfg.jobs = jobs;
    const fs::path out = dir.path() / ("out" + std::to_string(manifests.size()));
    EmitReport(RunEvaluation(LoadCorpus(cfg), cfg), cfg, "json", out.string());
    manifests.push_back(ReadFile((out / "manifest.json").string()));
  }
  const bool same = std::all_of(manifests.begin(), manifests.end(),
                                [&](const std::string& m) { return m == manifests[0]; });
  return {same, same ? "4 runs (jobs 1, 1, 8, 8) produced identical manifests"
                     : "manifests differ between runs"};
}

// 10. Throughput.
Outcome Throughput() {
  SynthOptions opt;
  opt.seed = 10;
  opt.questions = 1000;
  const SynthCorpus synth = GenerateSynthCorpus(opt);
  const auto start = Clock::now();
  RunConfig cfg;
  const EvaluationResult r = RunEvaluation(synth.corpus, cfg);
  const double secs = Seconds(start);
  std::size_t max_steps = 0;
  for (const auto& q : r.questions) max_steps = std::max(max_steps, q.program.steps.size());
  return {r.questions.size() == 1000 && r.errors.empty() && max_steps <= 6 && secs < 300.0,
          Fmt("1000 questions at 256x256 in %.1f s on %.0f hardware thread(s)", secs,
              std::max(1u, std::thread::hardware_concurrency()))};
}

}  // namespace
}  // namespace reasonattn

int main() {
  using namespace reasonattn;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AiR-E oracle equivalence", OracleEquivalence},
      {"affine invariance", AffineInvariance},
      {"ROI-trace golden fixtures", GoldenTraces},
      {"correct > incorrect on synthetic corpus", CorrectBeatsIncorrect},
      {"temporal diagonal dominance", TemporalDiagonal},
      {"correlation machinery", Correlation},
      {"supervision math", Supervision},
      {"fixation pipeline", FixationPipeline},
      {"determinism", Determinism},
      {"throughput", Throughput},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d acceptance criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
