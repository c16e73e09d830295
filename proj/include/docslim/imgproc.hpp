// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "docslim/errors.hpp"
#include "docslim/image.hpp"

namespace docslim {

enum class SobelAxis { kX, kY };

/// Rec. 601 luma: round(0.299 R + 0.587 G + 0.114 B), clamped to [0, 255].
inline GrayImage to_grayscale(const RgbImage& img) {
  validate(img, "to_grayscale");
  GrayImage out;
  out.height = img.height;
  out.width = img.width;
  out.data.resize(static_cast<std::size_t>(img.height) * img.width);
  const std::uint8_t* src = img.data.data();
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double y =
        0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    const long v = std::lround(y);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  return out;
}

/// 3x3 Sobel with edge replication at the borders. Returns raw signed
/// responses; the caller takes the absolute value.
inline SignedMap sobel(const GrayImage& img, SobelAxis axis) {
  validate(img, "sobel");
  if (img.height < 3 || img.width < 3) {
    throw ImageTooSmall("sobel: image must be at least 3x3");
  }
  const int h = img.height;
  const int w = img.width;
  SignedMap out;
  out.height = h;
  out.width = w;
  out.data.resize(static_cast<std::size_t>(h) * w);
  const std::uint8_t* p = img.data.data();
  auto px = [&](int y, int x) -> int {
    y = std::clamp(y, 0, h - 1);
    x = std::clamp(x, 0, w - 1);
    return p[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int v;
      if (axis == SobelAxis::kX) {
        v = (px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1)) -
            (px(y - 1, x - 1) + 2 * px(y, x - 1) + px(y + 1, x - 1));
      } else {
        v = (px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1)) -
            (px(y - 1, x - 1) + 2 * px(y - 1, x) + px(y - 1, x + 1));
      }
      out.data[static_cast<std::size_t>(y) * w + x] = static_cast<float>(v);
    }
  }
  return out;
}

/// Per-pixel max(|Sobel_x|, |Sobel_y|) with entries below `noise_thresh`
/// forced to exactly 0. Fused single pass; interior pixels avoid clamping.
inline GradientMap gradient_map(const GrayImage& img, float noise_thresh) {
  validate(img, "gradient_map");
  if (img.height < 3 || img.width < 3) {
    throw ImageTooSmall("gradient_map: image must be at least 3x3");
  }
  const int h = img.height;
  const int w = img.width;
  GradientMap out;
  out.height = h;
  out.width = w;
  out.data.resize(static_cast<std::size_t>(h) * w);
  const std::uint8_t* p = img.data.data();
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* rm = p + static_cast<std::size_t>(std::max(y - 1, 0)) * w;
    const std::uint8_t* r0 = p + static_cast<std::size_t>(y) * w;
    const std::uint8_t* rp =
        p + static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
    float* dst = out.data.data() + static_cast<std::size_t>(y) * w;
    auto emit = [&](int x, int xm, int xp) {
      const int sx = (rm[xp] + 2 * r0[xp] + rp[xp]) - (rm[xm] + 2 * r0[xm] + rp[xm]);
      const int sy = (rp[xm] + 2 * rp[x] + rp[xp]) - (rm[xm] + 2 * rm[x] + rm[xp]);
      const int g = std::max(std::abs(sx), std::abs(sy));
      dst[x] = (static_cast<float>(g) < noise_thresh) ? 0.0f : static_cast<float>(g);
    };
    emit(0, 0, 1);
    for (int x = 1; x + 1 < w; ++x) {
      emit(x, x - 1, x + 1);
    }
    emit(w - 1, w - 2, w - 1);
  }
  return out;
}

namespace detail {

// Precomputed bilinear sampling positions for one axis (half-pixel centers).
struct LerpAxis {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<double> frac;
};

inline LerpAxis make_lerp_axis(int in_dim, int out_dim) {
  LerpAxis ax;
  ax.lo.resize(out_dim);
  ax.hi.resize(out_dim);
  ax.frac.resize(out_dim);
  const double scale = static_cast<double>(in_dim) / out_dim;
  for (int k = 0; k < out_dim; ++k) {
    double s = (k + 0.5) * scale - 0.5;
    if (s < 0.0) s = 0.0;
    int lo = static_cast<int>(s);
    if (lo > in_dim - 1) lo = in_dim - 1;
    ax.lo[k] = lo;
    ax.hi[k] = std::min(lo + 1, in_dim - 1);
    ax.frac[k] = s - lo;
  }
  return ax;
}

}  // namespace detail

/// Bilinear resample to exactly (out_h, out_w). Identity dimensions return a
/// bitwise copy.
inline GradientMap resize_map(const GradientMap& map, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) {
    throw Error("resize_map: output dimensions must be at least 1");
  }
  if (out_h == map.height && out_w == map.width) return map;
  GradientMap out;
  out.height = out_h;
  out.width = out_w;
  out.data.resize(static_cast<std::size_t>(out_h) * out_w);
  const detail::LerpAxis ys = detail::make_lerp_axis(map.height, out_h);
  const detail::LerpAxis xs = detail::make_lerp_axis(map.width, out_w);
  for (int y = 0; y < out_h; ++y) {
    const float* a = map.data.data() + static_cast<std::size_t>(ys.lo[y]) * map.width;
    const float* b = map.data.data() + static_cast<std::size_t>(ys.hi[y]) * map.width;
    const double fy = ys.frac[y];
    float* dst = out.data.data() + static_cast<std::size_t>(y) * out_w;
    for (int x = 0; x < out_w; ++x) {
      const int x0 = xs.lo[x];
      const int x1 = xs.hi[x];
      const double fx = xs.frac[x];
      const double top = (1.0 - fx) * a[x0] + fx * a[x1];
      const double bot = (1.0 - fx) * b[x0] + fx * b[x1];
      dst[x] = static_cast<float>((1.0 - fy) * top + fy * bot);
    }
  }
  return out;
}

/// Bilinear per channel, rounded to 8 bits. Identity dimensions return a copy.
inline RgbImage resize_image(const RgbImage& img, int out_h, int out_w) {
  validate(img, "resize_image");
  if (out_h < 1 || out_w < 1) {
    throw Error("resize_image: output dimensions must be at least 1");
  }
  if (out_h == img.height && out_w == img.width) return img;
  RgbImage out;
  out.height = out_h;
  out.width = out_w;
  out.data.resize(static_cast<std::size_t>(out_h) * out_w * 3);
  const detail::LerpAxis ys = detail::make_lerp_axis(img.height, out_h);
  const detail::LerpAxis xs = detail::make_lerp_axis(img.width, out_w);
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  for (int y = 0; y < out_h; ++y) {
    const std::uint8_t* a = img.data.data() + ys.lo[y] * stride;
    const std::uint8_t* b = img.data.data() + ys.hi[y] * stride;
    const double fy = ys.frac[y];
    std::uint8_t* dst = out.data.data() + static_cast<std::size_t>(y) * out_w * 3;
    for (int x = 0; x < out_w; ++x) {
      const std::size_t x0 = static_cast<std::size_t>(xs.lo[x]) * 3;
      const std::size_t x1 = static_cast<std::size_t>(xs.hi[x]) * 3;
      const double fx = xs.frac[x];
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * a[x0 + c] + fx * a[x1 + c];
        const double bot = (1.0 - fx) * b[x0 + c] + fx * b[x1 + c];
        const long v = std::lround((1.0 - fy) * top + fy * bot);
        dst[3 * x + c] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
      }
    }
  }
  return out;
}

}  // namespace docslim
