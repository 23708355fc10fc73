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
#ifndef REASONATTN_ATTENTION_MAP_H_
#define REASONATTN_ATTENTION_MAP_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reasonattn/scene_graph.h"

namespace reasonattn {

inline constexpr int kDefaultMapSize = 256;
inline constexpr double kDefaultSigma = 9.0;
inline constexpr double kDegenerateStd = 1e-12;

// Dense row-major H x W array of reals.
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, double fill = 0.0);
  Grid(int rows, int cols, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& at(int r, int c) { return values_[Index(r, c)]; }
  double at(int r, int c) const { return values_[Index(r, c)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double Sum() const;
  double Max() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t Index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

// Canonical source labels. Machine maps may carry a model suffix,
// e.g. "machine:updown".
inline constexpr std::string_view kHumanCorrect = "human-correct";
inline constexpr std::string_view kHumanIncorrect = "human-incorrect";
inline constexpr std::string_view kHumanTotal = "human-total";
inline constexpr std::string_view kMachine = "machine";
bool IsValidSource(std::string_view source);

struct AttentionMap {
  Grid grid;
  std::string source = std::string(kMachine);
  bool normalized = false;
};

// Zero-mean, unit population-std version of a map, plus a summed-area table
// for O(1) rectangle sums. All zeros when the input is (near) constant.
class StandardizedMap {
 public:
  const Grid& grid() const { return grid_; }
  bool degenerate() const { return degenerate_; }
  int rows() const { return grid_.rows(); }
  int cols() const { return grid_.cols(); }

  // Sum over rows [r0, r1) and columns [c0, c1).
  double RectSum(int r0, int r1, int c0, int c1) const;

 private:
  friend StandardizedMap StandardizeMap(const AttentionMap& map);

  Grid grid_;
  bool degenerate_ = false;
  std::vector<double> integral_;  // (rows + 1) x (cols + 1)
};

StandardizedMap StandardizeMap(const AttentionMap& map);

// Pearson correlation over all pixels. Throws Error on size mismatch or when
// either map is constant.
double MapPearson(const AttentionMap& a, const AttentionMap& b);

// Divides by the maximum; an all-zero grid stays zero. Rejects negative mass.
AttentionMap NormalizeByMax(Grid grid, std::string source);

struct ImageSize {
  double width = 0.0;
  double height = 0.0;
};
inline ImageSize ImageSizeOf(const SceneGraph& g) { return {g.width, g.height}; }

struct Fixation {
  std::string question_id;
  std::string participant_id;
  double x = 0.0;
  double y = 0.0;
  double start_ms = 0.0;
  double end_ms = 0.0;
  std::string answer;
  bool is_correct = false;
};

// Normalized 1-D Gaussian truncated at ceil(4 sigma).
std::vector<double> GaussianKernel(double sigma);

// Unit impulse per fixation at its rescaled pixel, smoothed with the
// truncated Gaussian. Mass falling outside the grid is lost.
Grid FixationDensity(std::span<const Fixation> fixations, ImageSize image,
                     int size = kDefaultMapSize, double sigma = kDefaultSigma);

// FixationDensity scaled to max 1.
AttentionMap FixationsToMap(std::span<const Fixation> fixations, ImageSize image,
                            int size = kDefaultMapSize,
                            double sigma = kDefaultSigma,
                            std::string source = std::string(kHumanTotal));

// Half-open [lo_ms, hi_ms).
struct TemporalBin {
  double lo_ms = 0.0;
  double hi_ms = 0.0;
  friend bool operator==(const TemporalBin&, const TemporalBin&) = default;
};
std::vector<TemporalBin> DefaultTemporalBins();
// "0-1000,1000-2000" style.
std::vector<TemporalBin> ParseTemporalBins(std::string_view text);

struct TemporalSlices {
  std::vector<std::vector<Fixation>> bins;
  std::size_t dropped = 0;
};

// Assigns each fixation by start time. Throws Error for empty, reversed,
// unordered or overlapping bins.
TemporalSlices SliceFixationsTemporal(std::span<const Fixation> fixations,
                                      std::span<const TemporalBin> bins);

struct Proposal {
  BoundingBox box;
  double weight = 0.0;
};

struct ProposalAttention {
  std::vector<Proposal> proposals;
};

// Throws ValidationError if empty, any weight is negative or the weights do
// not sum to 1 within 1e-6.
void ValidateProposalAttention(const ProposalAttention& pa);

// Each proposal spreads weight / area over its rescaled box, by exact pixel
// coverage, so the grid integrates to the total weight.
Grid ProposalDensity(const ProposalAttention& pa, ImageSize image,
                     int size = kDefaultMapSize);

AttentionMap RasterizeProposalAttention(const ProposalAttention& pa,
                                        ImageSize image,
                                        int size = kDefaultMapSize,
                                        std::string source = std::string(kMachine));

// Bilinear resampling with pixel-center alignment; used to bring coarse
// spatial-attention grids (e.g. 7x7) up to the evaluation resolution.
Grid ResampleBilinear(const Grid& grid, int rows, int cols);

// --- file formats ---------------------------------------------------------

// Header: question_id,participant_id,x,y,start_ms,end_ms,answer,is_correct
std::vector<Fixation> ParseFixationCsv(std::string_view text);
std::string FixationsToCsv(std::span<const Fixation> fixations);

// {"h", "w", "data": [...]} row-major.
Grid GridFromJson(std::string_view text);
std::string GridToJson(const Grid& grid);
// One row per line, comma-separated.
Grid GridFromCsv(std::string_view text);
std::string GridToCsv(const Grid& grid);

// [{"box": [x, y, w, h], "weight": w}, ...]
ProposalAttention ParseProposalAttention(std::string_view text);

}  // namespace reasonattn

#endif  // REASONATTN_ATTENTION_MAP_H_
