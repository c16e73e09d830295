// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <png.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "docslim/errors.hpp"
#include "docslim/image.hpp"

namespace docslim {

/// Decode an 8-bit PNG to RGB. Grayscale and palette images are expanded,
/// alpha is dropped. 16-bit depths are rejected.
inline RgbImage read_png_rgb(const std::filesystem::path& path) {
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&im, path.string().c_str())) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw IoError("read_png_rgb: " + path.string() + ": " + msg);
  }
  if (im.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&im);
    throw IoError("read_png_rgb: " + path.string() + ": 16-bit depth not supported");
  }
  im.format = PNG_FORMAT_RGB;
  RgbImage out;
  out.height = static_cast<int>(im.height);
  out.width = static_cast<int>(im.width);
  out.data.resize(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, out.data.data(), 0, nullptr)) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw IoError("read_png_rgb: " + path.string() + ": " + msg);
  }
  return out;
}

/// Decode an 8-bit PNG to a single gray channel (color is converted).
inline GrayImage read_png_gray(const std::filesystem::path& path) {
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&im, path.string().c_str())) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw IoError("read_png_gray: " + path.string() + ": " + msg);
  }
  if (im.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&im);
    throw IoError("read_png_gray: " + path.string() + ": 16-bit depth not supported");
  }
  im.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.height = static_cast<int>(im.height);
  out.width = static_cast<int>(im.width);
  out.data.resize(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, out.data.data(), 0, nullptr)) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw IoError("read_png_gray: " + path.string() + ": " + msg);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, const RgbImage& img) {
  validate(img, "write_png");
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  im.width = static_cast<png_uint_32>(img.width);
  im.height = static_cast<png_uint_32>(img.height);
  im.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&im, path.string().c_str(), 0, img.data.data(), 0,
                               nullptr)) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw IoError("write_png: " + path.string() + ": " + msg);
  }
}

}  // namespace docslim
