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
#ifndef REASONATTN_SYNTH_H_
#define REASONATTN_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>

#include "reasonattn/pipeline.h"

namespace reasonattn {

struct SynthOptions {
  std::uint64_t seed = 7;
  int questions = 10;
  double image_width = 640.0;
  double image_height = 480.0;
  int participants = 6;
  // Resolution of the dense maps written to disk; the pipeline resamples
  // them to the evaluation size.
  int dense_map_size = 64;
  // Share of a "correct" dense map's mass placed on the final-step ROIs.
  double correct_mass = 0.8;
};

// A generated corpus plus the answers the generator planted.
struct SynthCorpus {
  Corpus corpus;
  // Final-step ROIs per question, known by construction.
  std::map<std::string, ObjectIdSet> final_rois;
  // Full per-step groups for questions whose trace never hits the
  // co-occurrence fallback.
  std::map<std::string, std::vector<std::vector<ObjectIdSet>>> expected_groups;
};

// Deterministic in `options`. Each question gets a scene, a program of at
// most six steps, dense human-correct / human-incorrect maps, fixations with
// step-by-step temporal drift, machine proposal attention, a machine outcome
// and proposal boxes for target derivation.
SynthCorpus GenerateSynthCorpus(const SynthOptions& options);

}  // namespace reasonattn

#endif  // REASONATTN_SYNTH_H_
