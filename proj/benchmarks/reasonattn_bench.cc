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
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "reasonattn/aire.h"
#include "reasonattn/attention_map.h"
#include "reasonattn/pipeline.h"
#include "reasonattn/program.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/synth.h"

namespace reasonattn {
namespace {

Grid RandomGrid(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid g(size, size);
  for (double& v : g.values()) v = u(rng);
  return g;
}

void BM_StandardizeMap(benchmark::State& state) {
  const AttentionMap m{RandomGrid(static_cast<int>(state.range(0)), 1)};
  for (auto _ : state) benchmark::DoNotOptimize(StandardizeMap(m));
}
BENCHMARK(BM_StandardizeMap)->Arg(64)->Arg(256);

void BM_BoxAirE(benchmark::State& state) {
  const StandardizedMap sm = StandardizeMap(AttentionMap{RandomGrid(256, 2)});
  const BoundingBox box{100.0, 80.0, 200.0, 150.0};
  for (auto _ : state) benchmark::DoNotOptimize(BoxAirE(sm, box, {640.0, 480.0}));
}
BENCHMARK(BM_BoxAirE);

void BM_FixationsToMap(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 640.0), uy(0.0, 480.0);
  std::vector<Fixation> fixations(static_cast<std::size_t>(state.range(0)));
  for (Fixation& f : fixations) {
    f.x = ux(rng);
    f.y = uy(rng);
    f.end_ms = 200.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(FixationsToMap(fixations, {640.0, 480.0}));
}
BENCHMARK(BM_FixationsToMap)->Arg(10)->Arg(200);

void BM_DeriveRoiTrace(benchmark::State& state) {
  SynthOptions opt;
  opt.questions = 50;
  const SynthCorpus synth = GenerateSynthCorpus(opt);
  const Corpus& corpus = synth.corpus;
  const CooccurrenceTable& table = *corpus.cooccurrence;
  std::vector<ReasoningProgram> programs;
  for (const Question& q : corpus.questions) programs.push_back(ParseProgram(q.program_text));
  std::size_t i = 0;
  for (auto _ : state) {
    const Question& q = corpus.questions[i % programs.size()];
    benchmark::DoNotOptimize(
        DeriveRoiTrace(programs[i % programs.size()], corpus.scenes.at(q.image_id), table));
    ++i;
  }
}
BENCHMARK(BM_DeriveRoiTrace);

}  // namespace
}  // namespace reasonattn

BENCHMARK_MAIN();
