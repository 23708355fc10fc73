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
#include "reasonattn/supervision.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reasonattn/error.h"

namespace reasonattn {

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

TargetAttention DeriveTargetAttention(const RoiSet& rois,
                                      std::span<const BoundingBox> proposals,
                                      const SceneGraph& graph) {
  if (proposals.empty()) throw Error("target attention: no proposals");
  TargetAttention out;
  out.step = rois.step;
  out.weights.assign(proposals.size(), 0.0);
  const ObjectIdSet all = rois.Union();
  double total = 0.0;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    for (const ObjectId& id : all) {
      out.weights[i] += Iou(proposals[i], graph.object(id).box);
    }
    total += out.weights[i];
  }
  if (total > 0.0) {
    for (double& w : out.weights) w /= total;
  } else {
    std::fill(out.weights.begin(), out.weights.end(),
              1.0 / static_cast<double>(proposals.size()));
    out.uniform_fallback = true;
  }
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

LossAndGradient KlAttentionLoss(std::span<const double> target,
                                std::span<const double> logits, double epsilon) {
  if (target.size() != logits.size()) {
    throw Error("kl_attention_loss: " + std::to_string(target.size()) +
                " targets vs " + std::to_string(logits.size()) + " logits");
  }
  LossAndGradient out;
  const std::vector<double> p = Softmax(logits);
  out.grad.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (target[i] > 0.0) {
      out.loss += target[i] * std::log(target[i] / std::max(p[i], epsilon));
    }
    out.grad[i] = p[i] - target[i];
  }
  // Rounding can leave a tiny negative value when p == target.
  out.loss = std::max(out.loss, 0.0);
  return out;
}

LossAndGradient CeOperationLoss(const OperationLabel& label,
                                std::span<const double> logits) {
  if (logits.size() != static_cast<std::size_t>(kNumOpKinds)) {
    throw Error("ce_operation_loss: expected " + std::to_string(kNumOpKinds) +
                " logits, got " + std::to_string(logits.size()));
  }
  const auto k = static_cast<std::size_t>(OpKindIndex(label.kind));
  // log-softmax computed directly so large margins do not underflow.
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  LossAndGradient out;
  out.loss = -(logits[k] - m - std::log(z));
  out.grad = Softmax(logits);
  out.grad[k] -= 1.0;
  return out;
}

double ThetaSchedule(long iter, long length) {
  if (length <= 0) throw Error("theta schedule: length must be positive");
  if (iter < 0 || iter > length) {
    throw Error("theta schedule: iteration " + std::to_string(iter) +
                " outside [0, " + std::to_string(length) + "]");
  }
  return 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(iter) /
                               static_cast<double>(length)));
}

LossBreakdown CombinedLoss(double l_ans, std::span<const double> att_losses,
                           std::span<const double> op_losses, long iter,
                           long length, double phi) {
  if (att_losses.empty() || att_losses.size() != op_losses.size()) {
    throw Error("combined_loss: need equal, non-zero numbers of attention (" +
                std::to_string(att_losses.size()) + ") and operation (" +
                std::to_string(op_losses.size()) + ") losses");
  }
  if (!(phi >= 0.0)) throw Error("combined_loss: phi must be non-negative");
  auto negative = [](double v) { return !(v >= 0.0); };
  if (negative(l_ans) || std::any_of(att_losses.begin(), att_losses.end(), negative) ||
      std::any_of(op_losses.begin(), op_losses.end(), negative)) {
    throw Error("combined_loss: loss terms must be non-negative");
  }
  LossBreakdown out;
  out.l_ans = l_ans;
  out.l_att.assign(att_losses.begin(), att_losses.end());
  out.l_op.assign(op_losses.begin(), op_losses.end());
  out.theta = ThetaSchedule(iter, length);
  out.phi = phi;
  double att = 0.0, op = 0.0;
  for (double v : att_losses) att += v;
  for (double v : op_losses) op += v;
  out.total = l_ans + out.theta * att + phi * op;
  return out;
}

}  // namespace reasonattn
