// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslim/imgproc.hpp"

#include <gtest/gtest.h>

#include "docslim/rng.hpp"
#include "test_support.hpp"

using docslim::GradientMap;
using docslim::GrayImage;
using docslim::RgbImage;
using docslim::SobelAxis;

namespace {

GrayImage make_gray(int h, int w, std::uint8_t fill) {
  GrayImage img;
  img.height = h;
  img.width = w;
  img.data.assign(static_cast<std::size_t>(h) * w, fill);
  return img;
}

// Left half 0, right half 255; the step sits between columns w/2-1 and w/2.
GrayImage step_edge(int h, int w) {
  GrayImage img = make_gray(h, w, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = w / 2; x < w; ++x) img.at(y, x) = 255;
  }
  return img;
}

GrayImage random_gray(int h, int w, std::uint64_t seed) {
  GrayImage img = make_gray(h, w, 0);
  docslim::Rng rng(seed);
  for (auto& px : img.data) px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return img;
}

TEST(ToGrayscale, PrimaryAndExtremes) {
  RgbImage img = docslim::make_rgb(1, 3, 0, 0, 0);
  img.at(0, 0, 0) = 255;
  img.at(0, 0, 1) = 255;
  img.at(0, 0, 2) = 255;
  img.at(0, 1, 0) = 255;  // pure red
  const GrayImage gray = docslim::to_grayscale(img);
  EXPECT_EQ(gray.at(0, 0), 255);  // white -> max
  EXPECT_EQ(gray.at(0, 1), 76);   // round(0.299 * 255)
  EXPECT_EQ(gray.at(0, 2), 0);    // black -> min
}

TEST(Sobel, ConstantImageIsZero) {
  const GrayImage img = make_gray(6, 7, 143);
  for (const SobelAxis axis : {SobelAxis::kX, SobelAxis::kY}) {
    const docslim::SignedMap m = docslim::sobel(img, axis);
    for (const float v : m.data) EXPECT_EQ(v, 0.0f);
  }
}

TEST(Sobel, VerticalStepEdge) {
  const GrayImage img = step_edge(8, 8);
  const docslim::SignedMap sx = docslim::sobel(img, SobelAxis::kX);
  const docslim::SignedMap sy = docslim::sobel(img, SobelAxis::kY);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      if (x == 3 || x == 4) {
        EXPECT_EQ(sx.at(y, x), 1020.0f) << y << "," << x;  // 4 * 255
      } else {
        EXPECT_EQ(sx.at(y, x), 0.0f) << y << "," << x;
      }
      EXPECT_EQ(sy.at(y, x), 0.0f);  // no variation along y
    }
  }
}

TEST(Sobel, MirrorAntisymmetryForAxisX) {
  const GrayImage img = random_gray(9, 12, 11);
  GrayImage mirrored = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      mirrored.at(y, x) = img.at(y, img.width - 1 - x);
    }
  }
  const docslim::SignedMap a = docslim::sobel(img, SobelAxis::kX);
  const docslim::SignedMap b = docslim::sobel(mirrored, SobelAxis::kX);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      EXPECT_EQ(b.at(y, x), -a.at(y, img.width - 1 - x));
    }
  }
}

TEST(Sobel, TooSmallThrows) {
  EXPECT_THROW(docslim::sobel(make_gray(2, 5, 0), SobelAxis::kX),
               docslim::ImageTooSmall);
  EXPECT_THROW(docslim::sobel(make_gray(5, 2, 0), SobelAxis::kY),
               docslim::ImageTooSmall);
}

TEST(GradientMap, ConstantAndStep) {
  const GradientMap flat = docslim::gradient_map(make_gray(5, 5, 200), 50.0f);
  for (const float v : flat.data) EXPECT_EQ(v, 0.0f);

  const GradientMap edge = docslim::gradient_map(step_edge(8, 8), 50.0f);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      EXPECT_EQ(edge.at(y, x), (x == 3 || x == 4) ? 1020.0f : 0.0f);
    }
  }
}

TEST(GradientMap, FaintTextureSuppressed) {
  // Horizontal ramp with slope 4: |sobel_x| = 32 in the interior, less at the
  // replicated borders. All of it sits below t_n = 50.
  GrayImage img = make_gray(6, 20, 0);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 20; ++x) img.at(y, x) = static_cast<std::uint8_t>(4 * x);
  }
  const GradientMap suppressed = docslim::gradient_map(img, 50.0f);
  for (const float v : suppressed.data) EXPECT_EQ(v, 0.0f);
  const GradientMap kept = docslim::gradient_map(img, 10.0f);
  EXPECT_EQ(kept.at(3, 10), 32.0f);
}

TEST(GradientMap, MatchesComposedSobel) {
  const GrayImage img = random_gray(17, 23, 77);
  const float tn = 60.0f;
  const GradientMap fused = docslim::gradient_map(img, tn);
  const docslim::SignedMap sx = docslim::sobel(img, SobelAxis::kX);
  const docslim::SignedMap sy = docslim::sobel(img, SobelAxis::kY);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float g = std::max(std::abs(sx.at(y, x)), std::abs(sy.at(y, x)));
      EXPECT_EQ(fused.at(y, x), g < tn ? 0.0f : g);
    }
  }
}

TEST(GradientMap, InvariantToConstantShift) {
  const GrayImage img = random_gray(12, 12, 5);
  GrayImage shifted = img;
  for (auto& px : shifted.data) {
    px = static_cast<std::uint8_t>(std::min(255, px / 2 + 40));
  }
  GrayImage base = img;
  for (auto& px : base.data) px = static_cast<std::uint8_t>(px / 2);
  GrayImage plus = base;
  for (auto& px : plus.data) px = static_cast<std::uint8_t>(px + 40);
  EXPECT_EQ(docslim::gradient_map(base, 50.0f).data,
            docslim::gradient_map(plus, 50.0f).data);
}

TEST(GradientMap, EntriesZeroOrAboveThreshold) {
  const GrayImage img = random_gray(20, 20, 99);
  const float tn = 120.0f;
  const GradientMap m = docslim::gradient_map(img, tn);
  for (const float v : m.data) {
    EXPECT_TRUE(v == 0.0f || v >= tn) << v;
  }
}

TEST(ResizeMap, IdentityIsBitwise) {
  GradientMap m;
  m.height = 3;
  m.width = 4;
  m.data = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  const GradientMap r = docslim::resize_map(m, 3, 4);
  EXPECT_EQ(r.data, m.data);
}

TEST(ResizeMap, BilinearAverage) {
  GradientMap m;
  m.height = 2;
  m.width = 2;
  m.data = {0, 0, 100, 100};
  const GradientMap r = docslim::resize_map(m, 1, 1);
  ASSERT_EQ(r.data.size(), 1u);
  EXPECT_FLOAT_EQ(r.data[0], 50.0f);
}

TEST(ResizeMap, ZeroMapStaysZero) {
  GradientMap m;
  m.height = 5;
  m.width = 9;
  m.data.assign(45, 0.0f);
  for (const auto [h, w] : {std::pair{1, 1}, {7, 3}, {64, 64}, {9, 5}}) {
    const GradientMap r = docslim::resize_map(m, h, w);
    for (const float v : r.data) EXPECT_EQ(v, 0.0f);
  }
}

TEST(ResizeImage, IdentityAndSolid) {
  RgbImage img = docslim::make_rgb(4, 5, 10, 200, 30);
  EXPECT_EQ(docslim::resize_image(img, 4, 5).data, img.data);
  const RgbImage big = docslim::resize_image(img, 9, 13);
  for (std::size_t i = 0; i < big.data.size(); i += 3) {
    EXPECT_EQ(big.data[i], 10);
    EXPECT_EQ(big.data[i + 1], 200);
    EXPECT_EQ(big.data[i + 2], 30);
  }
}

TEST(ResizeImage, CheckerboardDownToGray) {
  RgbImage img = docslim::make_rgb(2, 2, 0, 0, 0);
  for (int c = 0; c < 3; ++c) {
    img.at(0, 1, c) = 255;
    img.at(1, 0, c) = 255;
  }
  const RgbImage r = docslim::resize_image(img, 1, 1);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(r.at(0, 0, c), 128);
}

}  // namespace
