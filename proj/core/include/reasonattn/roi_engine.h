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
#ifndef REASONATTN_ROI_ENGINE_H_
#define REASONATTN_ROI_ENGINE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reasonattn/program.h"
#include "reasonattn/scene_graph.h"

namespace reasonattn {

inline constexpr int kDefaultFallbackK = 20;

// Scene-level co-occurrence counts between object categories.
class CooccurrenceTable {
 public:
  struct Neighbor {
    std::string category;
    int count = 0;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
  };

  // Incremental construction; one Add per scene graph.
  class Builder {
   public:
    void Add(const SceneGraph& graph);
    // Throws Error when no graph was added.
    CooccurrenceTable Build() const;

   private:
    std::size_t graphs_ = 0;
    std::set<std::string> categories_;
    std::map<std::pair<std::string, std::string>, int> counts_;
  };

  // Symmetric; zero for a == b and for unseen pairs.
  int count(std::string_view a, std::string_view b) const;
  bool knows(std::string_view category) const;
  // Categories with count > 0, by count descending then name ascending.
  const std::vector<Neighbor>& neighbors(std::string_view category) const;
  const std::set<std::string>& categories() const { return categories_; }

  // {"categories": [...], "counts": [[a, b, n], ...]} with a < b.
  std::string ToJson() const;
  static CooccurrenceTable FromJson(std::string_view text);

  friend bool operator==(const CooccurrenceTable& a, const CooccurrenceTable& b) {
    return a.categories_ == b.categories_ && a.counts_ == b.counts_;
  }

 private:
  void RebuildNeighbors();

  std::set<std::string> categories_;
  // Keyed with first < second.
  std::map<std::pair<std::string, std::string>, int> counts_;
  std::map<std::string, std::vector<Neighbor>, std::less<>> neighbors_;
};

CooccurrenceTable BuildCooccurrence(std::span<const SceneGraph> corpus);

struct RoiSet {
  int step = 0;
  std::vector<ObjectIdSet> groups;
  bool fallback_used = false;
  // Produced by a relate step; see ForwardedRois.
  bool relate = false;

  ObjectIdSet Union() const;
  friend bool operator==(const RoiSet&, const RoiSet&) = default;
};

struct RoiTrace {
  std::vector<RoiSet> sets;
  friend bool operator==(const RoiTrace&, const RoiTrace&) = default;
};

struct RoiOptions {
  int k = kDefaultFallbackK;
  // Non-canonical: keep only category objects linked to the previous step's
  // ROIs by an edge carrying the step's relation.
  bool strict_relate = false;
};

// The ROIs a later step sees as "the previous step": the related-category
// group for relate steps, the union of all groups otherwise.
ObjectIdSet ForwardedRois(const RoiSet& rois);

// Objects whose category is among the top-k co-occurrence neighbors of
// `missing_category` and present in `graph`. All objects when the table has
// never seen the category.
ObjectIdSet FallbackRois(const SceneGraph& graph, const CooccurrenceTable& table,
                         std::string_view missing_category, int k);

// Executes `program` over `graph`. The program must already be valid.
RoiTrace DeriveRoiTrace(const ReasoningProgram& program, const SceneGraph& graph,
                        const CooccurrenceTable& table,
                        const RoiOptions& options = {});

// Number of ROI groups a step of `kind` with `num_deps` dependencies produces.
std::size_t ExpectedGroupCount(OpKind kind, std::size_t num_deps);

}  // namespace reasonattn

#endif  // REASONATTN_ROI_ENGINE_H_
