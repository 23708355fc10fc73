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
#include "reasonattn/aire.h"

#include <algorithm>
#include <cmath>

#include "reasonattn/error.h"

namespace reasonattn {
namespace {

// First pixel index whose center (i + 0.5) is >= edge.
int FirstCenterAtOrAfter(double edge) {
  return static_cast<int>(std::ceil(edge - 0.5));
}

}  // namespace

double BoxAirE(const StandardizedMap& map, const BoundingBox& box, ImageSize image) {
  const BoundingBox clipped = ClipBox(box, image.width, image.height);
  if (!(clipped.area() > 0.0)) {
    throw Error("box_aire: box lies outside the image");
  }
  if (map.degenerate()) return 0.0;

  const double sx = map.cols() / image.width;
  const double sy = map.rows() / image.height;
  const double x0 = clipped.x * sx, x1 = clipped.right() * sx;
  const double y0 = clipped.y * sy, y1 = clipped.bottom() * sy;
  int c0 = std::max(0, FirstCenterAtOrAfter(x0));
  int c1 = std::min(map.cols(), FirstCenterAtOrAfter(x1));
  int r0 = std::max(0, FirstCenterAtOrAfter(y0));
  int r1 = std::min(map.rows(), FirstCenterAtOrAfter(y1));
  if (c0 >= c1) {
    c0 = std::clamp(static_cast<int>(std::floor(0.5 * (x0 + x1))), 0, map.cols() - 1);
    c1 = c0 + 1;
  }
  if (r0 >= r1) {
    r0 = std::clamp(static_cast<int>(std::floor(0.5 * (y0 + y1))), 0, map.rows() - 1);
    r1 = r0 + 1;
  }
  const double count = static_cast<double>(r1 - r0) * (c1 - c0);
  return map.RectSum(r0, r1, c0, c1) / count;
}

AirEStepScore AggregateStepAirE(const StandardizedMap& map, const RoiSet& rois,
                                OpKind kind, const SceneGraph& graph) {
  AirEStepScore out;
  out.step = rois.step;
  out.kind = kind;
  out.fallback_used = rois.fallback_used;
  const ImageSize image = ImageSizeOf(graph);

  for (std::size_t g = 0; g < rois.groups.size(); ++g) {
    std::optional<double> best;
    for (const ObjectId& id : rois.groups[g]) {
      const double s = BoxAirE(map, graph.object(id).box, image);
      best = best ? std::max(*best, s) : s;
    }
    if (!best) {
      out.notes.push_back("step " + std::to_string(rois.step) + ": group " +
                          std::to_string(g) + " is empty");
    }
    out.per_group.push_back(best);
  }

  std::vector<double> defined;
  for (const auto& v : out.per_group) {
    if (v) defined.push_back(*v);
  }
  if (defined.empty()) {
    out.notes.push_back("step " + std::to_string(rois.step) + ": no ROIs, score undefined");
    return out;
  }
  switch (kind) {
    case OpKind::kRelate:
    case OpKind::kCompare:
    case OpKind::kAnd: {
      double sum = 0.0;
      for (double v : defined) sum += v;
      out.score = sum / static_cast<double>(defined.size());
      break;
    }
    default:
      // Max over the union equals the max of per-group maxima.
      out.score = *std::max_element(defined.begin(), defined.end());
      break;
  }
  return out;
}

std::optional<double> AirEReport::TraceMean() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& s : steps) {
    if (s.score) {
      sum += *s.score;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

AirEReport ScoreTrace(const AttentionMap& map, const ReasoningProgram& program,
                      const RoiTrace& trace, const SceneGraph& graph,
                      std::string question_id) {
  if (trace.sets.size() != program.steps.size()) {
    throw Error("score_trace: trace has " + std::to_string(trace.sets.size()) +
                " steps, program has " + std::to_string(program.steps.size()));
  }
  AirEReport report;
  report.question_id = std::move(question_id);
  report.source = map.source;
  const StandardizedMap sm = StandardizeMap(map);
  if (sm.degenerate()) {
    report.notes.push_back("degenerate map: constant attention, all scores are 0");
  }
  std::map<OpKind, std::pair<double, int>> sums;
  for (std::size_t i = 0; i < program.steps.size(); ++i) {
    AirEStepScore s =
        AggregateStepAirE(sm, trace.sets[i], program.steps[i].kind, graph);
    if (s.fallback_used) {
      report.notes.push_back("step " + std::to_string(i) +
                             ": co-occurrence fallback used for a missing category");
    }
    report.notes.insert(report.notes.end(), s.notes.begin(), s.notes.end());
    if (s.score) {
      auto& [sum, n] = sums[s.kind];
      sum += *s.score;
      ++n;
    }
    report.steps.push_back(std::move(s));
  }
  for (const auto& [kind, acc] : sums) {
    report.per_kind_means[kind] = acc.first / acc.second;
  }
  return report;
}

TemporalMatrix ScoreTemporalMatrix(const std::vector<AttentionMap>& maps_by_bin,
                                   const ReasoningProgram& program,
                                   const RoiTrace& trace, const SceneGraph& graph) {
  if (maps_by_bin.empty()) throw Error("temporal matrix: at least one bin required");
  TemporalMatrix out;
  for (const AttentionMap& m : maps_by_bin) {
    const AirEReport r = ScoreTrace(m, program, trace, graph);
    std::vector<std::optional<double>> row;
    for (const auto& s : r.steps) row.push_back(s.score);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace reasonattn
