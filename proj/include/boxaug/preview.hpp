// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "boxaug/augment.hpp"
#include "boxaug/mask.hpp"
#include "boxaug/types.hpp"

namespace boxaug {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kAnnotationColour = {0, 0, 255};
inline constexpr Rgb kCutoutColour = {255, 0, 0};
inline constexpr int kOutlineWidth = 2;

/// Draws the outline of `r` inward from its pixel footprint, `thickness`
/// pixels wide, inside the panel of `panel_width` columns starting at `x_offset`.
inline void draw_rect(PixelImage& img, const Rect2D& r, const Rgb& colour, int thickness,
                      std::size_t x_offset, std::size_t panel_width) {
  const auto xs = pixel_span(r.left, r.right, panel_width);
  const auto ys = pixel_span(r.top, r.bottom, img.height());
  if (xs.end <= xs.begin || ys.end <= ys.begin) return;
  const auto t = static_cast<std::size_t>(thickness);
  for (std::size_t y = ys.begin; y < ys.end; ++y) {
    for (std::size_t x = xs.begin; x < xs.end; ++x) {
      const bool edge = x < xs.begin + t || x + t >= xs.end || y < ys.begin + t || y + t >= ys.end;
      if (!edge) continue;
      for (std::size_t c = 0; c < 3; ++c) img.at(x + x_offset, y, c) = colour[c];
    }
  }
}

/// Original (left) and augmented (right) side by side. Blue outlines mark
/// object annotations, red outlines mark cutout holes.
inline PixelImage render_preview(const Sample& original, const AugmentedSample& augmented) {
  const auto& a = original.image;
  const auto& b = augmented.sample.image;
  const std::size_t width = a.width() + b.width();
  const std::size_t height = std::max(a.height(), b.height());
  PixelImage canvas(width, height);
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) canvas.at(x, y, c) = a.at(x, y, c);
    }
  }
  for (std::size_t y = 0; y < b.height(); ++y) {
    for (std::size_t x = 0; x < b.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) canvas.at(a.width() + x, y, c) = b.at(x, y, c);
    }
  }
  for (const auto& l : original.labels) {
    if (!l.is_dont_care()) draw_rect(canvas, l.box2d, kAnnotationColour, kOutlineWidth, 0, a.width());
  }
  for (const auto& l : augmented.sample.labels) {
    if (!l.is_dont_care()) {
      draw_rect(canvas, l.box2d, kAnnotationColour, kOutlineWidth, a.width(), b.width());
    }
  }
  for (const auto& r : augmented.regions) {
    draw_rect(canvas, r, kCutoutColour, kOutlineWidth, a.width(), b.width());
  }
  return canvas;
}

}  // namespace boxaug
