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
#ifndef REASONATTN_OP_MAPPING_H_
#define REASONATTN_OP_MAPPING_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reasonattn/program.h"

namespace reasonattn {

// What a positional raw argument fills in the triplet.
enum class ArgRole { kCategory, kAttribute, kRelation, kDep };

struct OpMappingEntry {
  std::string raw_op;
  OpKind kind = OpKind::kSelect;
  std::vector<ArgRole> arg_roles;
  // Slot values implied by the raw operation name itself, e.g. the "color"
  // in "different color".
  std::optional<std::string> attribute;
  std::optional<std::string> category;
  std::optional<std::string> relation;
  // Mapping has no triplet backing in the operation vocabulary and should be
  // surfaced in reports.
  bool flagged = false;
};

struct StepTemplate {
  std::string raw_op;
  OpKind kind = OpKind::kSelect;
  std::optional<std::string> category;
  std::optional<std::string> attribute;
  std::optional<std::string> relation;
  // Raw arguments in dep role, still unresolved.
  std::vector<std::string> dep_refs;
  bool flagged = false;
};

// One operation of a GQA-style semantic program.
struct RawOperation {
  std::string operation;
  std::vector<std::string> arguments;
  std::vector<int> dependencies;
};

// Raw-name -> triplet table. Loaded once, then read-only.
class OpMappingTable {
 public:
  // JSON array of {"raw_op", "kind", "arg_roles": [...]} with optional
  // "attribute" / "category" / "relation" fixed slots and "flagged".
  static OpMappingTable FromJson(std::string_view text);
  static OpMappingTable FromFile(const std::string& path);

  const OpMappingEntry* Find(std::string_view raw_name) const;
  std::size_t size() const { return entries_.size(); }

  // Throws ValidationError naming `raw_name` when it is not in the table or
  // the argument count does not match the entry's roles.
  StepTemplate Normalize(std::string_view raw_name,
                         const std::vector<std::string>& raw_args) const;

 private:
  std::map<std::string, OpMappingEntry> entries_;
};

// Converts a GQA-style program into a validated ReasoningProgram. Step i is
// operation i; its deps are the declared dependencies followed by any
// dep-role arguments (which must be step indices). Throws ValidationError for
// unmapped operations and ProgramError for invalid results.
ReasoningProgram CompileRawProgram(const std::vector<RawOperation>& ops,
                                   const OpMappingTable& table,
                                   std::vector<std::string>* flagged_ops = nullptr);

// Parses [{"operation", "arguments": [...], "dependencies": [...]}].
std::vector<RawOperation> ParseRawProgram(std::string_view json_text);

}  // namespace reasonattn

#endif  // REASONATTN_OP_MAPPING_H_
