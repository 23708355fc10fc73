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
#include "reasonattn/op_mapping.h"

#include <charconv>

#include <nlohmann/json.hpp>

#include "reasonattn/io.h"
#include "reasonattn/tokens.h"

namespace reasonattn {
namespace {

using nlohmann::json;

ArgRole RoleFromName(const std::string& name, const std::string& raw_op) {
  const std::string n = NormalizeToken(name);
  if (n == "category") return ArgRole::kCategory;
  if (n == "attribute") return ArgRole::kAttribute;
  if (n == "relation") return ArgRole::kRelation;
  if (n == "dep") return ArgRole::kDep;
  throw ParseError("operation map: entry '" + raw_op + "': unknown arg role '" +
                       name + "'",
                   0, 0);
}

std::optional<std::string> OptionalToken(const json& entry, const char* key) {
  auto it = entry.find(key);
  if (it == entry.end() || it->is_null()) return std::nullopt;
  return NormalizeToken(it->get<std::string>());
}

}  // namespace

OpMappingTable OpMappingTable::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("operation map: ") + e.what(), pos.line,
                     pos.column);
  }
  if (!doc.is_array()) throw ParseError("operation map: expected an array", 0, 0);

  OpMappingTable table;
  for (const json& e : doc) {
    try {
      OpMappingEntry entry;
      entry.raw_op = NormalizeToken(e.at("raw_op").get<std::string>());
      const auto kind_name = e.at("kind").get<std::string>();
      auto kind = OpKindFromName(kind_name);
      if (!kind) {
        throw ParseError("operation map: entry '" + entry.raw_op +
                             "': unknown kind '" + kind_name + "'",
                         0, 0);
      }
      entry.kind = *kind;
      for (const json& r : e.at("arg_roles")) {
        entry.arg_roles.push_back(RoleFromName(r.get<std::string>(), entry.raw_op));
      }
      entry.attribute = OptionalToken(e, "attribute");
      entry.category = OptionalToken(e, "category");
      entry.relation = OptionalToken(e, "relation");
      entry.flagged = e.value("flagged", false);
      const std::string key = entry.raw_op;
      if (!table.entries_.emplace(key, std::move(entry)).second) {
        throw ParseError("operation map: duplicate raw_op '" + key + "'", 0, 0);
      }
    } catch (const json::exception& ex) {
      throw ParseError(std::string("operation map: malformed entry: ") + ex.what(),
                       0, 0);
    }
  }
  return table;
}

OpMappingTable OpMappingTable::FromFile(const std::string& path) {
  return FromJson(ReadFile(path));
}

const OpMappingEntry* OpMappingTable::Find(std::string_view raw_name) const {
  auto it = entries_.find(NormalizeToken(raw_name));
  return it == entries_.end() ? nullptr : &it->second;
}

StepTemplate OpMappingTable::Normalize(
    std::string_view raw_name, const std::vector<std::string>& raw_args) const {
  const OpMappingEntry* entry = Find(raw_name);
  if (entry == nullptr) {
    throw ValidationError(
        "unmapped raw operation '" + std::string(raw_name) + "'",
        std::string(raw_name));
  }
  if (raw_args.size() != entry->arg_roles.size()) {
    throw ValidationError("raw operation '" + std::string(raw_name) +
                              "' expects " +
                              std::to_string(entry->arg_roles.size()) +
                              " arguments, got " +
                              std::to_string(raw_args.size()),
                          std::string(raw_name));
  }
  StepTemplate out;
  out.raw_op = entry->raw_op;
  out.kind = entry->kind;
  out.category = entry->category;
  out.attribute = entry->attribute;
  out.relation = entry->relation;
  out.flagged = entry->flagged;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    switch (entry->arg_roles[i]) {
      case ArgRole::kCategory: out.category = NormalizeToken(raw_args[i]); break;
      case ArgRole::kAttribute: out.attribute = NormalizeToken(raw_args[i]); break;
      case ArgRole::kRelation: out.relation = NormalizeToken(raw_args[i]); break;
      case ArgRole::kDep: out.dep_refs.push_back(raw_args[i]); break;
    }
  }
  return out;
}

ReasoningProgram CompileRawProgram(const std::vector<RawOperation>& ops,
                                   const OpMappingTable& table,
                                   std::vector<std::string>* flagged_ops) {
  ReasoningProgram program;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const StepTemplate t = table.Normalize(ops[i].operation, ops[i].arguments);
    Step step;
    step.index = static_cast<int>(i);
    step.kind = t.kind;
    step.category = t.category;
    step.attribute = t.attribute;
    step.relation = t.relation;
    step.deps = ops[i].dependencies;
    for (const std::string& ref : t.dep_refs) {
      int dep = -1;
      const std::string trimmed = NormalizeToken(ref);
      auto [ptr, ec] =
          std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), dep);
      if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        throw ValidationError("operation " + std::to_string(i) + " ('" +
                                  t.raw_op + "'): dependency argument '" + ref +
                                  "' is not a step index",
                              t.raw_op);
      }
      step.deps.push_back(dep);
    }
    if (t.flagged && flagged_ops != nullptr) {
      flagged_ops->push_back(std::to_string(i) + ":" + t.raw_op);
    }
    program.steps.push_back(std::move(step));
  }
  auto violations = ValidateProgram(program);
  if (!violations.empty()) throw ProgramError(violations.front());
  return program;
}

std::vector<RawOperation> ParseRawProgram(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("raw program: ") + e.what(), pos.line,
                     pos.column);
  }
  std::vector<RawOperation> ops;
  try {
    for (const json& op : doc) {
      RawOperation r;
      r.operation = op.at("operation").get<std::string>();
      r.arguments = op.value("arguments", std::vector<std::string>{});
      r.dependencies = op.value("dependencies", std::vector<int>{});
      ops.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("raw program: ") + e.what(), 0, 0);
  }
  return ops;
}

}  // namespace reasonattn
