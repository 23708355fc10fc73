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
#include "reasonattn/roi_engine.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "reasonattn/error.h"
#include "reasonattn/tokens.h"

namespace reasonattn {
namespace {

using nlohmann::json;

std::pair<std::string, std::string> OrderedKey(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

void CooccurrenceTable::Builder::Add(const SceneGraph& graph) {
  ++graphs_;
  std::set<std::string> present;
  for (const auto& [id, obj] : graph.objects) present.insert(obj.category);
  categories_.insert(present.begin(), present.end());
  for (auto a = present.begin(); a != present.end(); ++a) {
    for (auto b = std::next(a); b != present.end(); ++b) {
      ++counts_[{*a, *b}];
    }
  }
}

CooccurrenceTable CooccurrenceTable::Builder::Build() const {
  if (graphs_ == 0) throw Error("co-occurrence: empty corpus");
  CooccurrenceTable table;
  table.categories_ = categories_;
  table.counts_ = counts_;
  table.RebuildNeighbors();
  return table;
}

void CooccurrenceTable::RebuildNeighbors() {
  neighbors_.clear();
  for (const auto& c : categories_) neighbors_[c];
  for (const auto& [key, n] : counts_) {
    if (n <= 0) continue;
    neighbors_[key.first].push_back({key.second, n});
    neighbors_[key.second].push_back({key.first, n});
  }
  for (auto& [c, list] : neighbors_) {
    std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) {
      return x.count != y.count ? x.count > y.count : x.category < y.category;
    });
  }
}

int CooccurrenceTable::count(std::string_view a, std::string_view b) const {
  const std::string na = NormalizeToken(a);
  const std::string nb = NormalizeToken(b);
  if (na == nb) return 0;
  auto it = counts_.find(OrderedKey(na, nb));
  return it == counts_.end() ? 0 : it->second;
}

bool CooccurrenceTable::knows(std::string_view category) const {
  return categories_.contains(NormalizeToken(category));
}

const std::vector<CooccurrenceTable::Neighbor>& CooccurrenceTable::neighbors(
    std::string_view category) const {
  static const std::vector<Neighbor> kNone;
  auto it = neighbors_.find(NormalizeToken(category));
  return it == neighbors_.end() ? kNone : it->second;
}

std::string CooccurrenceTable::ToJson() const {
  json counts = json::array();
  for (const auto& [key, n] : counts_) {
    if (n > 0) counts.push_back({key.first, key.second, n});
  }
  json doc = {{"categories", json(categories_)}, {"counts", std::move(counts)}};
  return doc.dump(1);
}

CooccurrenceTable CooccurrenceTable::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("co-occurrence: ") + e.what(), pos.line,
                     pos.column);
  }
  CooccurrenceTable table;
  try {
    for (const json& c : doc.at("categories")) {
      table.categories_.insert(NormalizeToken(c.get<std::string>()));
    }
    for (const json& row : doc.at("counts")) {
      if (!row.is_array() || row.size() != 3) {
        throw ParseError("co-occurrence: count rows are [a, b, n]", 0, 0);
      }
      const std::string a = NormalizeToken(row[0].get<std::string>());
      const std::string b = NormalizeToken(row[1].get<std::string>());
      const int n = row[2].get<int>();
      if (a == b || n < 0) {
        throw ValidationError("co-occurrence: invalid count for (" + a + ", " +
                                  b + ")",
                              a);
      }
      table.categories_.insert(a);
      table.categories_.insert(b);
      table.counts_[OrderedKey(a, b)] = n;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("co-occurrence: ") + e.what(), 0, 0);
  }
  table.RebuildNeighbors();
  return table;
}

CooccurrenceTable BuildCooccurrence(std::span<const SceneGraph> corpus) {
  CooccurrenceTable::Builder builder;
  for (const SceneGraph& g : corpus) builder.Add(g);
  return builder.Build();
}

ObjectIdSet RoiSet::Union() const {
  ObjectIdSet out;
  for (const auto& g : groups) out.insert(g.begin(), g.end());
  return out;
}

ObjectIdSet ForwardedRois(const RoiSet& rois) {
  // A relate step hands its related-category group to the next operation.
  if (rois.groups.size() == 2 && rois.relate) return rois.groups[1];
  return rois.Union();
}

ObjectIdSet FallbackRois(const SceneGraph& graph, const CooccurrenceTable& table,
                         std::string_view missing_category, int k) {
  ObjectIdSet out;
  if (!table.knows(missing_category)) {
    for (const auto& [id, obj] : graph.objects) out.insert(id);
    return out;
  }
  const auto& ranked = table.neighbors(missing_category);
  const std::size_t top = std::min(ranked.size(), static_cast<std::size_t>(std::max(k, 0)));
  std::set<std::string> wanted;
  for (std::size_t i = 0; i < top; ++i) wanted.insert(ranked[i].category);
  for (const auto& [id, obj] : graph.objects) {
    if (wanted.contains(obj.category)) out.insert(id);
  }
  return out;
}

std::size_t ExpectedGroupCount(OpKind kind, std::size_t num_deps) {
  switch (kind) {
    case OpKind::kRelate: return 2;
    case OpKind::kAnd:
    case OpKind::kOr:
    case OpKind::kCompare: return num_deps;
    default: return 1;
  }
}

namespace {

class Interpreter {
 public:
  Interpreter(const SceneGraph& graph, const CooccurrenceTable& table,
              const RoiOptions& options)
      : graph_(graph), table_(table), options_(options) {}

  RoiSet Run(const Step& step, const std::vector<RoiSet>& done) {
    RoiSet out;
    out.step = step.index;
    out.relate = step.kind == OpKind::kRelate;
    switch (step.kind) {
      case OpKind::kSelect:
        out.groups.push_back(CategoryObjects(*step.category, &out.fallback_used));
        break;
      case OpKind::kFilter: {
        ObjectIdSet kept;
        for (const auto& id : DepUnion(step, 0, done)) {
          if (HasAttribute(graph_.object(id), *step.attribute)) kept.insert(id);
        }
        out.groups.push_back(std::move(kept));
        break;
      }
      case OpKind::kQuery:
      case OpKind::kVerify: {
        ObjectIdSet previous = DepUnion(step, 0, done);
        if (step.category) {
          if (ObjectsByCategory(graph_, *step.category).empty()) {
            out.fallback_used = true;
            previous = FallbackRois(graph_, table_, *step.category, options_.k);
          } else {
            const std::string cat = NormalizeToken(*step.category);
            std::erase_if(previous, [&](const ObjectId& id) {
              return graph_.object(id).category != cat;
            });
          }
        }
        out.groups.push_back(std::move(previous));
        break;
      }
      case OpKind::kRelate: {
        ObjectIdSet previous = DepUnion(step, 0, done);
        ObjectIdSet related = CategoryObjects(*step.category, &out.fallback_used);
        if (options_.strict_relate && !out.fallback_used) {
          related = LinkedTo(related, previous, step.relation);
        }
        out.groups.push_back(std::move(previous));
        out.groups.push_back(std::move(related));
        break;
      }
      case OpKind::kCompare:
      case OpKind::kAnd:
      case OpKind::kOr:
        for (std::size_t d = 0; d < step.deps.size(); ++d) {
          out.groups.push_back(DepUnion(step, d, done));
        }
        break;
    }
    return out;
  }

 private:
  ObjectIdSet CategoryObjects(const std::string& category, bool* fallback) {
    ObjectIdSet found = ObjectsByCategory(graph_, category);
    if (found.empty()) {
      *fallback = true;
      return FallbackRois(graph_, table_, category, options_.k);
    }
    return found;
  }

  ObjectIdSet DepUnion(const Step& step, std::size_t which,
                       const std::vector<RoiSet>& done) const {
    const int dep = step.deps.at(which);
    if (dep < 0 || static_cast<std::size_t>(dep) >= done.size()) {
      throw Error("roi engine: step " + std::to_string(step.index) +
                  " has unresolved dependency " + std::to_string(dep));
    }
    return ForwardedRois(done[static_cast<std::size_t>(dep)]);
  }

  // Members of `candidates` sharing an edge (either direction) with `anchors`.
  ObjectIdSet LinkedTo(const ObjectIdSet& candidates, const ObjectIdSet& anchors,
                       const std::optional<std::string>& predicate) const {
    auto matches = [&](const Relation& r) {
      return !predicate || r.predicate == NormalizeToken(*predicate);
    };
    ObjectIdSet out;
    for (const auto& c : candidates) {
      bool linked = false;
      for (const Relation& r : graph_.object(c).relations) {
        linked |= anchors.contains(r.target) && matches(r);
      }
      for (const auto& a : anchors) {
        for (const Relation& r : graph_.object(a).relations) {
          linked |= r.target == c && matches(r);
        }
      }
      if (linked) out.insert(c);
    }
    return out;
  }

  const SceneGraph& graph_;
  const CooccurrenceTable& table_;
  const RoiOptions& options_;
};

}  // namespace

RoiTrace DeriveRoiTrace(const ReasoningProgram& program, const SceneGraph& graph,
                        const CooccurrenceTable& table,
                        const RoiOptions& options) {
  if (options.k < 1) throw Error("roi engine: k must be >= 1");
  Interpreter interp(graph, table, options);
  RoiTrace trace;
  trace.sets.reserve(program.steps.size());
  for (const Step& step : program.steps) {
    trace.sets.push_back(interp.Run(step, trace.sets));
  }
  return trace;
}

}  // namespace reasonattn
