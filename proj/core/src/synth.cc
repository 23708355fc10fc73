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
#include "reasonattn/synth.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace reasonattn {
namespace {

constexpr const char* kCategories[] = {
    "girl", "boy", "bag", "jeans", "car", "road", "tree", "table",
    "chair", "cup", "bottle", "dog", "cat", "bench", "lamp", "sign"};
constexpr const char* kColors[] = {"red", "blue", "green", "white", "black"};
constexpr const char* kSizes[] = {"large", "small"};
constexpr const char* kPredicates[] = {"to the left of", "on", "wearing", "near", "behind"};

template <typename T, std::size_t N>
const T& Pick(const T (&items)[N], std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string Color(const SceneObject& o) {
  for (const char* c : kColors) {
    if (o.attributes.contains(c)) return c;
  }
  return "red";
}

SceneGraph MakeScene(const std::string& image_id, const SynthOptions& opt,
                     std::mt19937_64& rng) {
  SceneGraph g;
  g.image_id = image_id;
  g.width = opt.image_width;
  g.height = opt.image_height;
  std::vector<std::string> cats(std::begin(kCategories), std::end(kCategories));
  std::shuffle(cats.begin(), cats.end(), rng);
  const int n = UniformInt(rng, 3, 6);
  for (int i = 0; i < n; ++i) {
    SceneObject o;
    o.id = image_id + "_o" + std::to_string(i);
    o.category = cats[static_cast<std::size_t>(i)];
    const double w = std::round(Uniform(rng, 40.0, 180.0));
    const double h = std::round(Uniform(rng, 40.0, 150.0));
    o.box = {std::round(Uniform(rng, 0.0, g.width - w)), std::round(Uniform(rng, 0.0, g.height - h)),
             w, h};
    o.attributes = {Pick(kColors, rng), Pick(kSizes, rng)};
    g.objects.emplace(o.id, std::move(o));
  }
  return g;
}

// Adds subject --predicate--> object unless already present.
void Link(SceneGraph& g, const ObjectId& subject, const std::string& predicate,
          const ObjectId& object) {
  auto& rels = g.objects.at(subject).relations;
  const Relation r{predicate, object};
  if (std::find(rels.begin(), rels.end(), r) == rels.end()) rels.push_back(r);
}

struct Planted {
  std::string program;
  ObjectIdSet final_rois;
  std::optional<std::vector<std::vector<ObjectIdSet>>> groups;
  // ROIs the attention should visit at step i (for temporal drift).
  std::vector<ObjectIdSet> forward;
};

Planted PlantProgram(SceneGraph& g, std::mt19937_64& rng) {
  std::vector<ObjectId> ids;
  for (const auto& [id, o] : g.objects) ids.push_back(id);
  std::shuffle(ids.begin(), ids.end(), rng);
  const SceneObject& a = g.objects.at(ids[0]);
  const SceneObject& b = g.objects.at(ids[1]);
  const SceneObject& c = g.objects.at(ids[2]);
  const ObjectIdSet A{a.id}, B{b.id}, C{c.id};
  const std::string rel1 = Pick(kPredicates, rng);
  const std::string rel2 = Pick(kPredicates, rng);
  std::ostringstream p;
  Planted out;
  switch (UniformInt(rng, 0, 5)) {
    case 0:  // jeans -> girl -> bag style chain
      Link(g, b.id, rel1, a.id);
      Link(g, c.id, rel2, b.id);
      p << "0: select(category=" << a.category << ")\n"
        << "1: relate(category=" << b.category << ", relation=" << rel1 << ") <- [0]\n"
        << "2: relate(category=" << c.category << ", relation=" << rel2 << ") <- [1]\n"
        << "3: query(attribute=color) <- [2]\n";
      out.groups = {{A}, {A, B}, {B, C}, {C}};
      out.forward = {A, B, C, C};
      out.final_rois = C;
      break;
    case 1:
      p << "0: select(category=" << a.category << ")\n"
        << "1: filter(attribute=" << Color(a) << ") <- [0]\n"
        << "2: query(attribute=size) <- [1]\n";
      out.groups = {{A}, {A}, {A}};
      out.forward = {A, A, A};
      out.final_rois = A;
      break;
    case 2:
      p << "0: select(category=" << a.category << ")\n"
        << "1: select(category=" << b.category << ")\n"
        << "2: compare(attribute=color) <- [0,1]\n";
      out.groups = {{A}, {B}, {A, B}};
      out.forward = {A, B, {a.id, b.id}};
      out.final_rois = {a.id, b.id};
      break;
    case 3:
      Link(g, b.id, rel1, a.id);
      p << "0: select(category=" << a.category << ")\n"
        << "1: relate(category=" << b.category << ", relation=" << rel1 << ") <- [0]\n"
        << "2: verify(category=" << b.category << ", attribute=" << Color(b) << ") <- [1]\n";
      out.groups = {{A}, {A, B}, {B}};
      out.forward = {A, B, B};
      out.final_rois = B;
      break;
    case 4:
      p << "0: select(category=" << a.category << ")\n"
        << "1: select(category=" << b.category << ")\n"
        << "2: select(category=" << c.category << ")\n"
        << "3: and <- [0,1,2]\n"
        << "4: or <- [3,2]\n"
        << "5: query(attribute=name) <- [4]\n";
      out.groups = {{A}, {B}, {C}, {A, B, C}, {{a.id, b.id, c.id}, C}, {{a.id, b.id, c.id}}};
      out.forward = {A, B, C, {a.id, b.id, c.id}, {a.id, b.id, c.id}, {a.id, b.id, c.id}};
      out.final_rois = {a.id, b.id, c.id};
      break;
    default: {
      // Non-existent referent: the first step falls back to co-occurring
      // objects, the relate step re-anchors on a real one.
      std::string missing;
      for (const char* cat : kCategories) {
        if (ObjectsByCategory(g, cat).empty()) {
          missing = cat;
          break;
        }
      }
      p << "0: select(category=" << missing << ")\n"
        << "1: relate(category=" << b.category << ", relation=" << rel1 << ") <- [0]\n"
        << "2: query(attribute=color) <- [1]\n";
      out.forward = {A, B, B};
      out.final_rois = B;
      break;
    }
  }
  out.program = p.str();
  return out;
}

// Pixel (r, c) of an M x M grid whose center lies in any of `boxes`.
std::vector<std::pair<int, int>> PixelsIn(const SceneGraph& g, const ObjectIdSet& ids, int m) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const double x = (c + 0.5) * g.width / m;
      const double y = (r + 0.5) * g.height / m;
      for (const auto& id : ids) {
        const BoundingBox& b = g.objects.at(id).box;
        if (x >= b.x && x < b.right() && y >= b.y && y < b.bottom()) {
          out.emplace_back(r, c);
          break;
        }
      }
    }
  }
  return out;
}

Grid RandomField(int m, std::mt19937_64& rng, double total) {
  Grid grid(m, m);
  double sum = 0.0;
  for (double& v : grid.values()) {
    v = Uniform(rng, 0.0, 1.0);
    sum += v;
  }
  for (double& v : grid.values()) v *= total / sum;
  return grid;
}

// A few smooth random blobs over weak background noise.
Grid RandomAttention(int m, std::mt19937_64& rng) {
  Grid grid = RandomField(m, rng, 0.2);
  const int blobs = UniformInt(rng, 2, 5);
  for (int k = 0; k < blobs; ++k) {
    const double cr = Uniform(rng, 0.0, m), cc = Uniform(rng, 0.0, m);
    const double s = Uniform(rng, 0.04, 0.12) * m;
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const double d2 = (r + 0.5 - cr) * (r + 0.5 - cr) + (c + 0.5 - cc) * (c + 0.5 - cc);
        grid.at(r, c) += std::exp(-0.5 * d2 / (s * s)) / blobs;
      }
    }
  }
  return grid;
}

Grid FocusedAttention(const SceneGraph& g, const ObjectIdSet& rois, int m, double mass,
                      std::mt19937_64& rng) {
  Grid grid = RandomField(m, rng, 1.0 - mass);
  auto pixels = PixelsIn(g, rois, m);
  if (pixels.empty()) {
    const BoundingBox& b = g.objects.at(*rois.begin()).box;
    pixels.emplace_back(
        std::clamp(static_cast<int>((b.y + b.h / 2) / g.height * m), 0, m - 1),
        std::clamp(static_cast<int>((b.x + b.w / 2) / g.width * m), 0, m - 1));
  }
  for (const auto& [r, c] : pixels) grid.at(r, c) += mass / static_cast<double>(pixels.size());
  return grid;
}

std::pair<double, double> PointIn(const BoundingBox& b, std::mt19937_64& rng) {
  return {Uniform(rng, b.x + 0.25 * b.w, b.x + 0.75 * b.w),
          Uniform(rng, b.y + 0.25 * b.h, b.y + 0.75 * b.h)};
}

}  // namespace

SynthCorpus GenerateSynthCorpus(const SynthOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  SynthCorpus out;
  Corpus& corpus = out.corpus;
  std::vector<Planted> planted;

  for (int q = 0; q < opt.questions; ++q) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "q%05d", q);
    const std::string qid = buf;
    std::snprintf(buf, sizeof(buf), "img%05d", q);
    SceneGraph g = MakeScene(buf, opt, rng);
    Planted p = PlantProgram(g, rng);
    corpus.questions.push_back({qid, g.image_id, p.program, std::nullopt});
    out.final_rois[qid] = p.final_rois;
    if (p.groups) out.expected_groups[qid] = *p.groups;
    corpus.scenes.emplace(g.image_id, std::move(g));
    planted.push_back(std::move(p));
  }

  for (int q = 0; q < opt.questions; ++q) {
    const Question& question = corpus.questions[static_cast<std::size_t>(q)];
    const SceneGraph& g = corpus.scenes.at(question.image_id);
    const Planted& p = planted[static_cast<std::size_t>(q)];
    const int m = opt.dense_map_size;

    auto& maps = corpus.maps[question.question_id];
    maps[std::string(kHumanCorrect)] = FocusedAttention(g, p.final_rois, m, opt.correct_mass, rng);
    maps[std::string(kHumanIncorrect)] = RandomAttention(m, rng);

    // Human fixations: correct participants drift across the steps' ROIs one
    // second at a time; incorrect ones mostly wander.
    const double difficulty = Uniform(rng, 0.2, 1.0);
    for (int part = 0; part < opt.participants; ++part) {
      const bool correct = Uniform(rng, 0.0, 1.0) < difficulty;
      double t = 0.0;
      while (t < 3000.0) {
        const double dur = Uniform(rng, 180.0, 320.0);
        const auto step = std::min<std::size_t>(static_cast<std::size_t>(t / 1000.0),
                                                p.forward.size() - 1);
        double x = Uniform(rng, 0.0, g.width), y = Uniform(rng, 0.0, g.height);
        if (correct ? Uniform(rng, 0.0, 1.0) < 0.85 : Uniform(rng, 0.0, 1.0) < 0.3) {
          const ObjectIdSet& targets = p.forward[step];
          auto it = targets.begin();
          std::advance(it, UniformInt(rng, 0, static_cast<int>(targets.size()) - 1));
          std::tie(x, y) = PointIn(g.objects.at(*it).box, rng);
        }
        corpus.fixations.push_back({question.question_id, "p" + std::to_string(part), x, y, t,
                                    t + dur, correct ? "right" : "wrong", correct});
        t += dur + Uniform(rng, 20.0, 60.0);
      }
    }

    // Machine attention over proposals: object boxes plus distractors, with a
    // per-question quality driving both focus and performance.
    const double quality = Uniform(rng, 0.0, 1.0);
    std::vector<BoundingBox> boxes;
    std::vector<bool> on_target;
    for (const auto& [id, o] : g.objects) {
      boxes.push_back(o.box);
      on_target.push_back(p.final_rois.contains(id));
    }
    for (int k = 0; k < 3; ++k) {
      const double w = std::round(Uniform(rng, 30.0, 120.0)), h = std::round(Uniform(rng, 30.0, 120.0));
      boxes.push_back({std::round(Uniform(rng, 0.0, g.width - w)),
                       std::round(Uniform(rng, 0.0, g.height - h)), w, h});
      on_target.push_back(false);
    }
    const auto hits = static_cast<double>(std::count(on_target.begin(), on_target.end(), true));
    const double misses = static_cast<double>(boxes.size()) - hits;
    ProposalAttention pa;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      pa.proposals.push_back({boxes[i], on_target[i] ? quality / hits : (1.0 - quality) / misses});
    }
    maps["machine"] = pa;
    corpus.proposals[question.question_id] = boxes;
    const double noise = std::normal_distribution<double>(0.0, 0.05)(rng);
    corpus.outcomes.push_back({question.question_id, "machine",
                               std::clamp(0.1 + 0.8 * quality + noise, 0.0, 1.0), std::nullopt});
  }

  std::vector<SceneGraph> scenes;
  for (const auto& [id, g] : corpus.scenes) scenes.push_back(g);
  if (!scenes.empty()) corpus.cooccurrence = BuildCooccurrence(scenes);
  return out;
}

}  // namespace reasonattn
