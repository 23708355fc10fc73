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
#include "reasonattn/attention_map.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reasonattn/csv.h"
#include "reasonattn/error.h"
#include "reasonattn/tokens.h"

namespace reasonattn {
namespace {

using nlohmann::json;

void CheckShape(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw Error("grid dimensions must be positive, got " + std::to_string(rows) +
                "x" + std::to_string(cols));
  }
}

void CheckImage(ImageSize image) {
  if (!(image.width > 0.0) || !(image.height > 0.0)) {
    throw Error("image size must be positive");
  }
}

// Pixel index along one axis for an image-space coordinate.
int RescaledPixel(double coord, double extent, int size) {
  const double scaled = std::floor(coord / extent * size);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(size - 1)));
}

}  // namespace

Grid::Grid(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  CheckShape(rows, cols);
  values_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                 fill);
}

Grid::Grid(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  CheckShape(rows, cols);
  if (values_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw Error("grid: expected " + std::to_string(rows * cols) + " values, got " +
                std::to_string(values_.size()));
  }
}

double Grid::Sum() const {
  long double s = 0.0L;
  for (double v : values_) s += v;
  return static_cast<double>(s);
}

double Grid::Max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool IsValidSource(std::string_view source) {
  return source == kHumanCorrect || source == kHumanIncorrect ||
         source == kHumanTotal || source == kMachine ||
         (source.starts_with("machine:") && source.size() > 8);
}

double StandardizedMap::RectSum(int r0, int r1, int c0, int c1) const {
  if (r0 >= r1 || c0 >= c1) return 0.0;
  const std::size_t stride = static_cast<std::size_t>(cols()) + 1;
  auto I = [&](int r, int c) {
    return integral_[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(c)];
  };
  return I(r1, c1) - I(r0, c1) - I(r1, c0) + I(r0, c0);
}

StandardizedMap StandardizeMap(const AttentionMap& map) {
  const Grid& in = map.grid;
  const auto n = static_cast<long double>(in.size());
  long double mean = 0.0L;
  for (double v : in.values()) mean += v;
  mean /= n;
  long double var = 0.0L;
  for (double v : in.values()) var += (v - mean) * (v - mean);
  const long double sd = std::sqrt(var / n);

  StandardizedMap out;
  out.grid_ = Grid(in.rows(), in.cols());
  out.degenerate_ = !(sd >= kDegenerateStd);
  if (!out.degenerate_) {
    auto dst = out.grid_.values();
    auto src = in.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = static_cast<double>((src[i] - mean) / sd);
    }
  }

  const int rows = in.rows();
  const int cols = in.cols();
  const std::size_t stride = static_cast<std::size_t>(cols) + 1;
  out.integral_.assign((static_cast<std::size_t>(rows) + 1) * stride, 0.0);
  for (int r = 0; r < rows; ++r) {
    long double row_sum = 0.0L;
    for (int c = 0; c < cols; ++c) {
      row_sum += out.grid_.at(r, c);
      const std::size_t idx = static_cast<std::size_t>(r + 1) * stride +
                              static_cast<std::size_t>(c + 1);
      out.integral_[idx] = out.integral_[idx - stride] + static_cast<double>(row_sum);
    }
  }
  return out;
}

double MapPearson(const AttentionMap& a, const AttentionMap& b) {
  if (a.grid.rows() != b.grid.rows() || a.grid.cols() != b.grid.cols()) {
    throw Error("map_pearson: dimension mismatch");
  }
  const auto xs = a.grid.values();
  const auto ys = b.grid.values();
  const auto n = static_cast<long double>(xs.size());
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(std::sqrt(sxx / n) >= kDegenerateStd) || !(std::sqrt(syy / n) >= kDegenerateStd)) {
    throw Error("map_pearson: correlation undefined for a constant map");
  }
  const long double r = sxy / std::sqrt(sxx * syy);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

AttentionMap NormalizeByMax(Grid grid, std::string source) {
  double max = 0.0;
  for (double v : grid.values()) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error("attention map values must be finite and non-negative");
    }
    max = std::max(max, v);
  }
  if (max > 0.0) {
    for (double& v : grid.values()) v /= max;
  }
  return {std::move(grid), std::move(source), true};
}

std::vector<double> GaussianKernel(double sigma) {
  if (!(sigma > 0.0)) throw Error("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : k) v /= total;
  return k;
}

Grid FixationDensity(std::span<const Fixation> fixations, ImageSize image,
                     int size, double sigma) {
  CheckImage(image);
  Grid grid(size, size);
  const std::vector<double> kernel = GaussianKernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  for (const Fixation& f : fixations) {
    const int pr = RescaledPixel(f.y, image.height, size);
    const int pc = RescaledPixel(f.x, image.width, size);
    const int r0 = std::max(0, pr - radius), r1 = std::min(size - 1, pr + radius);
    const int c0 = std::max(0, pc - radius), c1 = std::min(size - 1, pc + radius);
    for (int r = r0; r <= r1; ++r) {
      const double kr = kernel[static_cast<std::size_t>(r - pr + radius)];
      for (int c = c0; c <= c1; ++c) {
        grid.at(r, c) += kr * kernel[static_cast<std::size_t>(c - pc + radius)];
      }
    }
  }
  return grid;
}

AttentionMap FixationsToMap(std::span<const Fixation> fixations, ImageSize image,
                            int size, double sigma, std::string source) {
  return NormalizeByMax(FixationDensity(fixations, image, size, sigma),
                        std::move(source));
}

std::vector<TemporalBin> DefaultTemporalBins() {
  return {{0.0, 1000.0}, {1000.0, 2000.0}, {2000.0, 3000.0}};
}

std::vector<TemporalBin> ParseTemporalBins(std::string_view text) {
  std::vector<TemporalBin> bins;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string item = NormalizeToken(text.substr(start, end - start));
    const std::size_t dash = item.find('-', 1);
    if (item.empty() || dash == std::string::npos) {
      throw ParseError("temporal bins: expected 'lo-hi', got '" + item + "'", 0, 0);
    }
    bins.push_back({ParseDouble(item.substr(0, dash), "bin start"),
                    ParseDouble(item.substr(dash + 1), "bin end")});
    start = end + 1;
  }
  return bins;
}

TemporalSlices SliceFixationsTemporal(std::span<const Fixation> fixations,
                                      std::span<const TemporalBin> bins) {
  if (bins.empty()) throw Error("temporal bins: at least one bin required");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (!(bins[i].lo_ms < bins[i].hi_ms)) {
      throw Error("temporal bins: bin " + std::to_string(i) + " is empty or reversed");
    }
    if (i > 0 && bins[i].lo_ms < bins[i - 1].hi_ms) {
      throw Error("temporal bins: bin " + std::to_string(i) +
                  " overlaps or precedes its predecessor");
    }
  }
  TemporalSlices out;
  out.bins.resize(bins.size());
  for (const Fixation& f : fixations) {
    auto it = std::find_if(bins.begin(), bins.end(), [&](const TemporalBin& b) {
      return f.start_ms >= b.lo_ms && f.start_ms < b.hi_ms;
    });
    if (it == bins.end()) {
      ++out.dropped;
    } else {
      out.bins[static_cast<std::size_t>(it - bins.begin())].push_back(f);
    }
  }
  return out;
}

void ValidateProposalAttention(const ProposalAttention& pa) {
  if (pa.proposals.empty()) {
    throw ValidationError("proposal attention: no proposals", "proposals");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pa.proposals.size(); ++i) {
    const double w = pa.proposals[i].weight;
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("proposal attention: negative weight at " + std::to_string(i),
                            std::to_string(i));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ValidationError("proposal attention: weights sum to " + FormatReal(total) +
                              ", expected 1",
                          "weights");
  }
}

Grid ProposalDensity(const ProposalAttention& pa, ImageSize image, int size) {
  CheckImage(image);
  ValidateProposalAttention(pa);
  Grid grid(size, size);
  const double sx = size / image.width;
  const double sy = size / image.height;
  const double lim = static_cast<double>(size);
  for (std::size_t i = 0; i < pa.proposals.size(); ++i) {
    const auto& [box, weight] = pa.proposals[i];
    const double x0 = std::clamp(box.x * sx, 0.0, lim);
    const double x1 = std::clamp(box.right() * sx, 0.0, lim);
    const double y0 = std::clamp(box.y * sy, 0.0, lim);
    const double y1 = std::clamp(box.bottom() * sy, 0.0, lim);
    const double area = (x1 - x0) * (y1 - y0);
    if (!(area > 0.0)) {
      throw ValidationError("proposal " + std::to_string(i) +
                                " has zero area at map resolution",
                            std::to_string(i));
    }
    const double density = weight / area;
    const int c_begin = static_cast<int>(std::floor(x0));
    const int c_end = std::min(size, static_cast<int>(std::ceil(x1)));
    const int r_begin = static_cast<int>(std::floor(y0));
    const int r_end = std::min(size, static_cast<int>(std::ceil(y1)));
    for (int r = r_begin; r < r_end; ++r) {
      const double oy = std::min(y1, r + 1.0) - std::max(y0, static_cast<double>(r));
      if (oy <= 0.0) continue;
      for (int c = c_begin; c < c_end; ++c) {
        const double ox = std::min(x1, c + 1.0) - std::max(x0, static_cast<double>(c));
        if (ox > 0.0) grid.at(r, c) += density * ox * oy;
      }
    }
  }
  return grid;
}

AttentionMap RasterizeProposalAttention(const ProposalAttention& pa, ImageSize image,
                                        int size, std::string source) {
  return NormalizeByMax(ProposalDensity(pa, image, size), std::move(source));
}

Grid ResampleBilinear(const Grid& grid, int rows, int cols) {
  Grid out(rows, cols);
  auto source_coord = [](int dst, int dst_n, int src_n) {
    const double s = (dst + 0.5) * src_n / dst_n - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(src_n - 1));
  };
  for (int r = 0; r < rows; ++r) {
    const double sr = source_coord(r, rows, grid.rows());
    const int r0 = static_cast<int>(std::floor(sr));
    const int r1 = std::min(r0 + 1, grid.rows() - 1);
    const double fr = sr - r0;
    for (int c = 0; c < cols; ++c) {
      const double sc = source_coord(c, cols, grid.cols());
      const int c0 = static_cast<int>(std::floor(sc));
      const int c1 = std::min(c0 + 1, grid.cols() - 1);
      const double fc = sc - c0;
      const double top = grid.at(r0, c0) * (1 - fc) + grid.at(r0, c1) * fc;
      const double bottom = grid.at(r1, c0) * (1 - fc) + grid.at(r1, c1) * fc;
      out.at(r, c) = top * (1 - fr) + bottom * fr;
    }
  }
  return out;
}

// --- file formats ---------------------------------------------------------

namespace {

constexpr const char* kFixationColumns[] = {
    "question_id", "participant_id", "x", "y", "start_ms", "end_ms", "answer", "is_correct"};

bool ParseBool(const std::string& raw, std::size_t line) {
  const std::string v = NormalizeToken(raw);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ParseError("fixation csv: is_correct must be 0/1/true/false, got '" + raw + "'",
                   line, 0);
}

}  // namespace

std::vector<Fixation> ParseFixationCsv(std::string_view text) {
  const auto rows = ReadCsv(text);
  if (rows.empty()) throw ParseError("fixation csv: missing header", 1, 1);
  const auto& header = rows.front();
  if (header.size() != std::size(kFixationColumns)) {
    throw ParseError("fixation csv: expected 8 columns in header", 1, 1);
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (NormalizeToken(header[i]) != kFixationColumns[i]) {
      throw ParseError(std::string("fixation csv: header column ") +
                           std::to_string(i + 1) + " must be '" +
                           kFixationColumns[i] + "'",
                       1, 1);
    }
  }
  std::vector<Fixation> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::size_t line = i + 1;
    if (row.size() != header.size()) {
      throw ParseError("fixation csv: expected 8 fields, got " + std::to_string(row.size()),
                       line, 1);
    }
    Fixation f;
    try {
      f.question_id = row[0];
      f.participant_id = row[1];
      f.x = ParseDouble(row[2], "x");
      f.y = ParseDouble(row[3], "y");
      f.start_ms = ParseDouble(row[4], "start_ms");
      f.end_ms = ParseDouble(row[5], "end_ms");
    } catch (const ParseError& e) {
      throw ParseError(std::string("fixation csv: ") + e.what(), line, 1);
    }
    f.answer = row[6];
    f.is_correct = ParseBool(row[7], line);
    if (!(f.start_ms >= 0.0) || !(f.start_ms < f.end_ms)) {
      throw ParseError("fixation csv: need 0 <= start_ms < end_ms", line, 1);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string FixationsToCsv(std::span<const Fixation> fixations) {
  std::ostringstream out;
  out << "question_id,participant_id,x,y,start_ms,end_ms,answer,is_correct\n";
  for (const Fixation& f : fixations) {
    out << CsvField(f.question_id) << ',' << CsvField(f.participant_id) << ','
        << FormatReal(f.x) << ',' << FormatReal(f.y) << ',' << FormatReal(f.start_ms)
        << ',' << FormatReal(f.end_ms) << ',' << CsvField(f.answer) << ','
        << (f.is_correct ? 1 : 0) << '\n';
  }
  return out.str();
}

Grid GridFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
    return Grid(doc.at("h").get<int>(), doc.at("w").get<int>(),
                doc.at("data").get<std::vector<double>>());
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("map json: ") + e.what(), pos.line, pos.column);
  } catch (const json::exception& e) {
    throw ParseError(std::string("map json: ") + e.what(), 0, 0);
  }
}

std::string GridToJson(const Grid& grid) {
  json data = json::array();
  for (double v : grid.values()) data.push_back(RoundReal(v));
  json doc = {{"h", grid.rows()}, {"w", grid.cols()}, {"data", std::move(data)}};
  return doc.dump();
}

Grid GridFromCsv(std::string_view text) {
  const auto rows = ReadCsv(text);
  if (rows.empty()) throw ParseError("map csv: empty", 1, 1);
  std::vector<double> values;
  const std::size_t cols = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ParseError("map csv: ragged row", r + 1, 1);
    }
    for (const auto& field : rows[r]) {
      try {
        values.push_back(ParseDouble(NormalizeToken(field), "map value"));
      } catch (const ParseError& e) {
        throw ParseError(std::string("map csv: ") + e.what(), r + 1, 1);
      }
    }
  }
  return Grid(static_cast<int>(rows.size()), static_cast<int>(cols), std::move(values));
}

std::string GridToCsv(const Grid& grid) {
  std::ostringstream out;
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      out << (c ? "," : "") << FormatReal(grid.at(r, c));
    }
    out << '\n';
  }
  return out.str();
}

ProposalAttention ParseProposalAttention(std::string_view text) {
  ProposalAttention pa;
  try {
    const json doc = json::parse(text);
    for (const json& p : doc) {
      const auto box = p.at("box").get<std::vector<double>>();
      if (box.size() != 4) throw ParseError("proposal box must be [x, y, w, h]", 0, 0);
      pa.proposals.push_back({{box[0], box[1], box[2], box[3]}, p.at("weight").get<double>()});
    }
  } catch (const json::parse_error& e) {
    const auto pos = PositionOf(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string("proposal json: ") + e.what(), pos.line, pos.column);
  } catch (const json::exception& e) {
    throw ParseError(std::string("proposal json: ") + e.what(), 0, 0);
  }
  ValidateProposalAttention(pa);
  return pa;
}

}  // namespace reasonattn
