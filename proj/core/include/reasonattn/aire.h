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
#ifndef REASONATTN_AIRE_H_
#define REASONATTN_AIRE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reasonattn/attention_map.h"
#include "reasonattn/program.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/scene_graph.h"

namespace reasonattn {

// Mean standardized attention over the pixels whose centers fall inside the
// half-open box after rescaling from image space to map resolution. A box too
// small to contain any pixel center scores the pixel under its center.
// Degenerate maps score 0. Throws Error if the box misses the image.
double BoxAirE(const StandardizedMap& map, const BoundingBox& box, ImageSize image);

struct AirEStepScore {
  int step = 0;
  OpKind kind = OpKind::kSelect;
  // Max box score per group; nullopt for empty groups.
  std::vector<std::optional<double>> per_group;
  // nullopt when every group is empty.
  std::optional<double> score;
  bool fallback_used = false;
  std::vector<std::string> notes;
};

// Single-set kinds take the max over the group, Or takes the max over all
// ROIs, Relate/Compare/And average the per-group maxima of non-empty groups.
AirEStepScore AggregateStepAirE(const StandardizedMap& map, const RoiSet& rois,
                                OpKind kind, const SceneGraph& graph);

struct AirEReport {
  std::string question_id;
  std::string source;
  std::vector<AirEStepScore> steps;
  // Mean of the defined step scores of each kind present in the trace.
  std::map<OpKind, double> per_kind_means;
  std::vector<std::string> notes;

  // Mean of all defined step scores; nullopt if none.
  std::optional<double> TraceMean() const;
};

AirEReport ScoreTrace(const AttentionMap& map, const ReasoningProgram& program,
                      const RoiTrace& trace, const SceneGraph& graph,
                      std::string question_id = {});

// Entry (bin, step) is the step score under that bin's map.
using TemporalMatrix = std::vector<std::vector<std::optional<double>>>;
TemporalMatrix ScoreTemporalMatrix(const std::vector<AttentionMap>& maps_by_bin,
                                   const ReasoningProgram& program,
                                   const RoiTrace& trace, const SceneGraph& graph);

}  // namespace reasonattn

#endif  // REASONATTN_AIRE_H_
