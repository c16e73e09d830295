// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "docslim/errors.hpp"
#include "docslim/imgproc.hpp"

namespace docslim {

/// Default pixel cap, 1728 x 1728.
inline constexpr std::int64_t kDefaultMaxPixels = 1728LL * 1728LL;

struct ResizePolicy {
  std::int64_t max_pixels = kDefaultMaxPixels;
};

struct ResizePlan {
  int out_h = 0;
  int out_w = 0;
  double scale = 1.0;
  bool resized = false;
};

/// Decide the output dimensions for the pixel cap without touching pixels.
/// Images at or under the cap pass through; above it both sides shrink by
/// r = sqrt(max_pixels / (H*W)) with the resulting dimensions floored, so the
/// output never exceeds the cap and the aspect ratio is preserved up to the
/// one-pixel rounding of each side.
inline ResizePlan plan_flexible_resize(int height, int width,
                                       const ResizePolicy& policy) {
  if (policy.max_pixels < 1) {
    throw Error("plan_flexible_resize: max_pixels must be at least 1");
  }
  if (height < 1 || width < 1) {
    throw Error("plan_flexible_resize: dimensions must be at least 1");
  }
  const std::int64_t pixels =
      static_cast<std::int64_t>(height) * static_cast<std::int64_t>(width);
  if (pixels <= policy.max_pixels) {
    return ResizePlan{height, width, 1.0, false};
  }
  const double r = std::sqrt(static_cast<double>(policy.max_pixels) /
                             static_cast<double>(pixels));
  const int out_h = static_cast<int>(std::floor(r * height));
  const int out_w = static_cast<int>(std::floor(r * width));
  if (out_h < 1 || out_w < 1) {
    throw DegenerateOutput("plan_flexible_resize: cap collapses one dimension to 0");
  }
  return ResizePlan{out_h, out_w, r, true};
}

/// Apply the plan with bilinear resampling. Returns the image and the scale
/// factor actually used (1.0 when the image is already under the cap).
inline std::pair<RgbImage, double> flexible_resize(const RgbImage& img,
                                                   const ResizePolicy& policy) {
  validate(img, "flexible_resize");
  const ResizePlan plan = plan_flexible_resize(img.height, img.width, policy);
  if (!plan.resized) {
    return {img, 1.0};
  }
  return {resize_image(img, plan.out_h, plan.out_w), plan.scale};
}

}  // namespace docslim
