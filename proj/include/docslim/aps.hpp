// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "docslim/errors.hpp"
#include "docslim/imgproc.hpp"

namespace docslim {

inline constexpr int kDefaultNormSize = 2048;
inline constexpr float kDefaultNoiseThresh = 50.0f;
inline constexpr int kDefaultRunThresh = 10;

/// Default profile-sum threshold below which a normalized line counts as
/// redundant. Calibrated with `docslim calibrate-tv`: the smallest swept value
/// that keeps full planted-band recall with zero content-line removals on the
/// built-in calibration corpus. Denoising already zeroes sub-threshold
/// gradients, so any remaining mass marks a line as content.
inline constexpr double kDefaultValueThresh = 1.0;

inline constexpr double kDefaultMaxRemovalFrac = 0.95;

struct ApsParams {
  int norm_size = kDefaultNormSize;
  float noise_thresh = kDefaultNoiseThresh;
  int run_thresh = kDefaultRunThresh;
  double value_thresh = kDefaultValueThresh;
  double max_removal_frac = kDefaultMaxRemovalFrac;
};

inline void validate(const ApsParams& p) {
  if (p.norm_size < 64) throw Error("ApsParams: norm_size must be >= 64");
  if (p.noise_thresh < 0.0f) throw Error("ApsParams: noise_thresh must be >= 0");
  if (p.run_thresh < 1) throw Error("ApsParams: run_thresh must be >= 1");
  if (p.value_thresh < 0.0) throw Error("ApsParams: value_thresh must be >= 0");
  if (!(p.max_removal_frac > 0.0 && p.max_removal_frac < 1.0)) {
    throw Error("ApsParams: max_removal_frac must be in (0, 1)");
  }
}

enum class BandAxis { kRows, kCols };

/// Half-open index interval [begin, end).
struct Interval {
  int begin = 0;
  int end = 0;

  int width() const { return end - begin; }
  bool operator==(const Interval&) const = default;
};

/// Sorted, pairwise disjoint intervals along one axis, in original-image
/// coordinates.
struct BandSet {
  BandAxis axis = BandAxis::kRows;
  std::vector<Interval> intervals;

  int total_width() const {
    int sum = 0;
    for (const Interval& iv : intervals) sum += iv.width();
    return sum;
  }
  bool contains(int line) const {
    for (const Interval& iv : intervals) {
      if (line >= iv.begin && line < iv.end) return true;
    }
    return false;
  }
};

struct SlimResult {
  RgbImage image;
  BandSet row_bands;
  BandSet col_bands;
  std::int64_t original_pixels = 0;
  std::int64_t slimmed_pixels = 0;
  double reduction = 0.0;
  bool guard_fired = false;
};

/// Per-line sums of a square normalized gradient map. axis = kRows yields one
/// entry per row (sum across that row), kCols one entry per column.
inline std::vector<double> profile_sums(const GradientMap& map, BandAxis axis) {
  if (map.height != map.width) {
    throw ShapeMismatch("profile_sums: map must be square (normalized)");
  }
  const int n = map.height;
  std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
  if (axis == BandAxis::kRows) {
    for (int y = 0; y < n; ++y) {
      const float* row = map.data.data() + static_cast<std::size_t>(y) * n;
      double acc = 0.0;
      for (int x = 0; x < n; ++x) acc += row[x];
      sums[y] = acc;
    }
  } else {
    for (int y = 0; y < n; ++y) {
      const float* row = map.data.data() + static_cast<std::size_t>(y) * n;
      for (int x = 0; x < n; ++x) sums[x] += row[x];
    }
  }
  return sums;
}

/// Identify continuous runs of profile entries strictly below value_thresh
/// whose length strictly exceeds run_thresh. A run of exactly run_thresh is
/// kept (not redundant).
inline std::vector<Interval> icr(std::span<const double> profile,
                                 double value_thresh, int run_thresh) {
  std::vector<Interval> out;
  const int n = static_cast<int>(profile.size());
  int run_start = -1;
  for (int k = 0; k <= n; ++k) {
    const bool low = k < n && profile[k] < value_thresh;
    if (low) {
      if (run_start < 0) run_start = k;
    } else if (run_start >= 0) {
      if (k - run_start > run_thresh) out.push_back(Interval{run_start, k});
      run_start = -1;
    }
  }
  return out;
}

/// Scale normalized intervals back to original coordinates. Start is rounded
/// up and end rounded down so that a line whose normalized cell was only
/// partially below threshold is never removed. Intervals that round to zero
/// width are dropped.
inline std::vector<Interval> denormalize_bands(std::span<const Interval> bands,
                                               int norm_size, int orig_dim) {
  std::vector<Interval> out;
  out.reserve(bands.size());
  const std::int64_t n = norm_size;
  const std::int64_t d = orig_dim;
  for (const Interval& iv : bands) {
    const std::int64_t begin = (static_cast<std::int64_t>(iv.begin) * d + n - 1) / n;
    const std::int64_t end = static_cast<std::int64_t>(iv.end) * d / n;
    if (end > begin) {
      out.push_back(Interval{static_cast<int>(begin), static_cast<int>(end)});
    }
  }
  return out;
}

namespace detail {

inline void check_bands(const BandSet& bands, int dim, const char* who) {
  int prev_end = 0;
  bool first = true;
  for (const Interval& iv : bands.intervals) {
    if (iv.end <= iv.begin || iv.begin < 0 || iv.end > dim) {
      throw Error(std::string(who) + ": invalid interval");
    }
    if (!first && iv.begin < prev_end) {
      throw Error(std::string(who) + ": intervals must be sorted and disjoint");
    }
    prev_end = iv.end;
    first = false;
  }
}

inline std::vector<int> kept_indices(int dim, const BandSet& bands) {
  std::vector<int> keep;
  keep.reserve(dim);
  std::size_t b = 0;
  for (int i = 0; i < dim; ++i) {
    while (b < bands.intervals.size() && i >= bands.intervals[b].end) ++b;
    const bool removed = b < bands.intervals.size() &&
                         i >= bands.intervals[b].begin && i < bands.intervals[b].end;
    if (!removed) keep.push_back(i);
  }
  return keep;
}

}  // namespace detail

/// Drop every row/column covered by the band sets, keeping the rest in
/// original order. Removal along the two axes is independent.
inline RgbImage remove_bands(const RgbImage& img, const BandSet& rows,
                             const BandSet& cols) {
  validate(img, "remove_bands");
  detail::check_bands(rows, img.height, "remove_bands(rows)");
  detail::check_bands(cols, img.width, "remove_bands(cols)");
  const std::vector<int> keep_rows = detail::kept_indices(img.height, rows);
  const std::vector<int> keep_cols = detail::kept_indices(img.width, cols);
  if (keep_rows.empty() || keep_cols.empty()) {
    throw EmptyResult("remove_bands: removal would leave an empty image");
  }
  RgbImage out;
  out.height = static_cast<int>(keep_rows.size());
  out.width = static_cast<int>(keep_cols.size());
  out.data.resize(static_cast<std::size_t>(out.height) * out.width * 3);
  const std::size_t in_stride = static_cast<std::size_t>(img.width) * 3;
  std::uint8_t* dst = out.data.data();
  for (const int y : keep_rows) {
    const std::uint8_t* src = img.data.data() + y * in_stride;
    for (const int x : keep_cols) {
      const std::uint8_t* px = src + static_cast<std::size_t>(x) * 3;
      *dst++ = px[0];
      *dst++ = px[1];
      *dst++ = px[2];
    }
  }
  return out;
}

/// Adaptive pixel slimming: locate contiguous low-gradient row/column bands on
/// the normalized gradient map and cut them out of the original image.
///
/// Degeneracy guard: if the proposed removal exceeds max_removal_frac of the
/// rows or of the columns, the image is returned unchanged with empty bands.
inline SlimResult aps(const RgbImage& img, const ApsParams& params = {}) {
  validate(img, "aps");
  validate(params);
  const GrayImage gray = to_grayscale(img);
  const GradientMap grad = gradient_map(gray, params.noise_thresh);
  const GradientMap norm = resize_map(grad, params.norm_size, params.norm_size);

  const std::vector<double> row_profile = profile_sums(norm, BandAxis::kRows);
  const std::vector<double> col_profile = profile_sums(norm, BandAxis::kCols);
  const std::vector<Interval> row_norm =
      icr(row_profile, params.value_thresh, params.run_thresh);
  const std::vector<Interval> col_norm =
      icr(col_profile, params.value_thresh, params.run_thresh);

  SlimResult res;
  res.row_bands.axis = BandAxis::kRows;
  res.col_bands.axis = BandAxis::kCols;
  res.row_bands.intervals = denormalize_bands(row_norm, params.norm_size, img.height);
  res.col_bands.intervals = denormalize_bands(col_norm, params.norm_size, img.width);
  res.original_pixels =
      static_cast<std::int64_t>(img.height) * static_cast<std::int64_t>(img.width);

  const int removed_rows = res.row_bands.total_width();
  const int removed_cols = res.col_bands.total_width();
  const bool guard =
      removed_rows > params.max_removal_frac * img.height ||
      removed_cols > params.max_removal_frac * img.width;
  if (guard) {
    res.image = img;
    res.row_bands.intervals.clear();
    res.col_bands.intervals.clear();
    res.slimmed_pixels = res.original_pixels;
    res.reduction = 0.0;
    res.guard_fired = true;
    return res;
  }

  res.image = remove_bands(img, res.row_bands, res.col_bands);
  res.slimmed_pixels = static_cast<std::int64_t>(res.image.height) *
                       static_cast<std::int64_t>(res.image.width);
  res.reduction = 1.0 - static_cast<double>(res.slimmed_pixels) /
                            static_cast<double>(res.original_pixels);
  return res;
}

/// Tint the removed bands over the original image (light blue, fixed alpha).
inline RgbImage render_overlay(const RgbImage& img, const BandSet& rows,
                               const BandSet& cols) {
  validate(img, "render_overlay");
  detail::check_bands(rows, img.height, "render_overlay(rows)");
  detail::check_bands(cols, img.width, "render_overlay(cols)");
  constexpr double kAlpha = 0.45;
  constexpr int kTint[3] = {110, 170, 255};
  std::vector<char> row_mask(img.height, 0);
  std::vector<char> col_mask(img.width, 0);
  for (const Interval& iv : rows.intervals) {
    std::fill(row_mask.begin() + iv.begin, row_mask.begin() + iv.end, 1);
  }
  for (const Interval& iv : cols.intervals) {
    std::fill(col_mask.begin() + iv.begin, col_mask.begin() + iv.end, 1);
  }
  RgbImage out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!row_mask[y] && !col_mask[x]) continue;
      for (int c = 0; c < 3; ++c) {
        const double v = (1.0 - kAlpha) * out.at(y, x, c) + kAlpha * kTint[c];
        out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(v));
      }
    }
  }
  return out;
}

}  // namespace docslim
