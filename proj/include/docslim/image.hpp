// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "docslim/errors.hpp"

namespace docslim {

/// 8-bit RGB raster, row-major interleaved triplets.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // 3 * height * width

  std::uint8_t& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

/// 8-bit single-channel raster.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // height * width

  std::uint8_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

/// Raw signed Sobel responses, same shape as the source image.
struct SignedMap {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  float at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

/// Per-pixel nonnegative gradient magnitude. After denoising every entry
/// is either exactly 0 or at least the noise threshold it was built with.
struct GradientMap {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  float at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

inline RgbImage make_rgb(int height, int width, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
  RgbImage img;
  img.height = height;
  img.width = width;
  img.data.resize(static_cast<std::size_t>(height) * width * 3);
  for (std::size_t i = 0; i < img.data.size(); i += 3) {
    img.data[i] = r;
    img.data[i + 1] = g;
    img.data[i + 2] = b;
  }
  return img;
}

inline void validate(const RgbImage& img, const std::string& who = "RgbImage") {
  if (img.height < 1 || img.width < 1) {
    throw Error(who + ": dimensions must be at least 1x1");
  }
  if (img.data.size() != static_cast<std::size_t>(img.height) * img.width * 3) {
    throw ShapeMismatch(who + ": data length does not match 3*H*W");
  }
}

inline void validate(const GrayImage& img, const std::string& who = "GrayImage") {
  if (img.height < 1 || img.width < 1) {
    throw Error(who + ": dimensions must be at least 1x1");
  }
  if (img.data.size() != static_cast<std::size_t>(img.height) * img.width) {
    throw ShapeMismatch(who + ": data length does not match H*W");
  }
}

}  // namespace docslim
