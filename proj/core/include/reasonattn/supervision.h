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
#ifndef REASONATTN_SUPERVISION_H_
#define REASONATTN_SUPERVISION_H_

#include <span>
#include <vector>

#include "reasonattn/program.h"
#include "reasonattn/roi_engine.h"
#include "reasonattn/scene_graph.h"

namespace reasonattn {

inline constexpr double kDefaultPhi = 0.5;
inline constexpr long kDefaultScheduleLength = 300000;
inline constexpr double kKlEpsilon = 1e-8;

double Iou(const BoundingBox& a, const BoundingBox& b);

// Per-proposal ground-truth attention for one reasoning step.
struct TargetAttention {
  int step = 0;
  std::vector<double> weights;
  bool uniform_fallback = false;
};

// Weight of a proposal = sum of its IoUs with every ROI box (union over the
// step's groups), normalized over proposals. Uniform when nothing overlaps.
TargetAttention DeriveTargetAttention(const RoiSet& rois,
                                      std::span<const BoundingBox> proposals,
                                      const SceneGraph& graph);

struct OperationLabel {
  int step = 0;
  OpKind kind = OpKind::kSelect;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logit
};

std::vector<double> Softmax(std::span<const double> logits);

// KL(target || softmax(logits)) with the predicted probability clamped below
// at `epsilon` inside the log and 0 ln 0 = 0. Gradient is softmax - target.
LossAndGradient KlAttentionLoss(std::span<const double> target,
                                std::span<const double> logits,
                                double epsilon = kKlEpsilon);
inline LossAndGradient KlAttentionLoss(const TargetAttention& target,
                                       std::span<const double> logits,
                                       double epsilon = kKlEpsilon) {
  return KlAttentionLoss(target.weights, logits, epsilon);
}

// Cross-entropy over the eight operation kinds; `logits` has one entry per
// OpKind in enum order.
LossAndGradient CeOperationLoss(const OperationLabel& label,
                                std::span<const double> logits);

// 0.5 (1 + cos(pi * iter / length)). Throws Error for iter outside
// [0, length] or length <= 0.
double ThetaSchedule(long iter, long length = kDefaultScheduleLength);

struct LossBreakdown {
  double l_ans = 0.0;
  std::vector<double> l_att;
  std::vector<double> l_op;
  double theta = 0.0;
  double phi = 0.0;
  double total = 0.0;
};

// l_ans + theta * sum(l_att) + phi * sum(l_op), theta from the schedule.
LossBreakdown CombinedLoss(double l_ans, std::span<const double> att_losses,
                           std::span<const double> op_losses, long iter,
                           long length = kDefaultScheduleLength,
                           double phi = kDefaultPhi);

}  // namespace reasonattn

#endif  // REASONATTN_SUPERVISION_H_
