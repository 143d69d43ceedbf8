// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "boxaug/types.hpp"

namespace boxaug {

/// Binary per-pixel raster, 1 where a pixel is covered by some box.
class BoxMask {
 public:
  BoxMask(std::size_t width, std::size_t height)
      : width_(width), height_(height), bits_(width * height, 0) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  bool test(std::size_t x, std::size_t y) const noexcept { return bits_[y * width_ + x] != 0; }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  /// Sets every pixel of the half-open range [x0,x1) x [y0,y1).
  void fill(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) noexcept {
    for (std::size_t y = y0; y < y1; ++y) {
      std::fill(bits_.begin() + static_cast<std::ptrdiff_t>(y * width_ + x0),
                bits_.begin() + static_cast<std::ptrdiff_t>(y * width_ + x1), std::uint8_t{1});
    }
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  bool operator==(const BoxMask&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> bits_;
};

/// Integer pixel span [begin, end) covered by the real interval [lo, hi),
/// clipped to [0, extent).
struct PixelSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline PixelSpan pixel_span(double lo, double hi, std::size_t extent) noexcept {
  const double limit = static_cast<double>(extent);
  const double b = std::clamp(std::floor(lo), 0.0, limit);
  const double e = std::clamp(std::ceil(hi), 0.0, limit);
  if (!(e > b)) return {};
  return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

/// Union of the pixel footprints of all non-DontCare boxes.
inline BoxMask build_box_mask(std::span<const ObjectLabel> labels, std::size_t width,
                              std::size_t height) {
  BoxMask mask(width, height);
  for (const auto& label : labels) {
    if (label.is_dont_care()) continue;
    const auto xs = pixel_span(label.box2d.left, label.box2d.right, width);
    const auto ys = pixel_span(label.box2d.top, label.box2d.bottom, height);
    if (xs.end > xs.begin && ys.end > ys.begin) mask.fill(xs.begin, ys.begin, xs.end, ys.end);
  }
  return mask;
}

}  // namespace boxaug
