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
#ifndef REASONATTN_PROGRAM_H_
#define REASONATTN_PROGRAM_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reasonattn/error.h"

namespace reasonattn {

// The eight atomic reasoning operations.
enum class OpKind { kSelect, kFilter, kQuery, kVerify, kCompare, kRelate, kAnd, kOr };

inline constexpr std::array<OpKind, 8> kAllOpKinds = {
    OpKind::kSelect, OpKind::kFilter,  OpKind::kQuery, OpKind::kVerify,
    OpKind::kCompare, OpKind::kRelate, OpKind::kAnd,   OpKind::kOr};
inline constexpr int kNumOpKinds = static_cast<int>(kAllOpKinds.size());

// Lowercase DSL name ("select", "filter", ...).
std::string_view OpKindName(OpKind kind);
std::optional<OpKind> OpKindFromName(std::string_view name);
inline int OpKindIndex(OpKind kind) { return static_cast<int>(kind); }

// One <operation, attribute, category> triplet plus its dependencies.
struct Step {
  int index = 0;
  OpKind kind = OpKind::kSelect;
  std::optional<std::string> category;
  std::optional<std::string> attribute;
  std::optional<std::string> relation;
  std::vector<int> deps;

  friend bool operator==(const Step&, const Step&) = default;
};

struct ReasoningProgram {
  std::vector<Step> steps;

  // The answer-producing step is always the last one.
  int final_step() const { return static_cast<int>(steps.size()) - 1; }

  friend bool operator==(const ReasoningProgram&,
                         const ReasoningProgram&) = default;
};

enum class ProgramRule {
  kEmpty,
  kIndexMismatch,
  kArity,
  kForwardDependency,
  kDependencyOutOfRange,
  kUnreachable,
};
std::string_view ProgramRuleName(ProgramRule rule);

struct ProgramViolation {
  int step = -1;
  ProgramRule rule = ProgramRule::kEmpty;
  std::string message;
};

// Raised by ParseProgram for rule violations in syntactically valid text.
class ProgramError : public ValidationError {
 public:
  ProgramError(const ProgramViolation& violation);
  const ProgramViolation& violation() const { return violation_; }

 private:
  ProgramViolation violation_;
};

// Line-oriented program text, one step per line:
//   INDEX ':' OPNAME ['(' key '=' value {',' key '=' value} ')']
//         ['<-' '[' INDEX {',' INDEX} ']']
// Keys are category, attribute and relation. Values run to the next ',' or
// ')' and may contain spaces. Blank lines and lines starting with '#' are
// skipped. Throws ParseError for syntax problems and ProgramError for the
// first invariant violation.
ReasoningProgram ParseProgram(std::string_view text);

std::string SerializeProgram(const ReasoningProgram& program);

// Every invariant violation, in step order; empty iff the program is valid.
std::vector<ProgramViolation> ValidateProgram(const ReasoningProgram& program);

}  // namespace reasonattn

#endif  // REASONATTN_PROGRAM_H_
