// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boxaug/error.hpp"

namespace boxaug {

/// Row-major, interleaved 8-bit RGB image.
class PixelImage {
 public:
  static constexpr std::size_t kChannels = 3;

  PixelImage() = default;

  PixelImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : width_(width), height_(height), data_(width * height * kChannels, fill) {
    if (width == 0 || height == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "image dimensions must be positive");
    }
  }

  PixelImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width == 0 || height == 0 || data_.size() != width * height * kChannels) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pixel buffer size does not match " + std::to_string(width) + "x" +
                      std::to_string(height) + "x3");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t offset(std::size_t x, std::size_t y) const noexcept {
    return (y * width_ + x) * kChannels;
  }

  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const noexcept {
    return data_[offset(x, y) + c];
  }
  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) noexcept {
    return data_[offset(x, y) + c];
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  bool operator==(const PixelImage&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Axis-aligned box in pixel coordinates.
struct Rect2D {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const noexcept { return right - left; }
  double height() const noexcept { return bottom - top; }
  double area() const noexcept {
    return (right > left && bottom > top) ? (right - left) * (bottom - top) : 0.0;
  }

  bool operator==(const Rect2D&) const = default;
};

inline Rect2D intersect(const Rect2D& a, const Rect2D& b) noexcept {
  return {std::max(a.left, b.left), std::max(a.top, b.top), std::min(a.right, b.right),
          std::min(a.bottom, b.bottom)};
}

struct Dims3D {
  double height = 0.0;
  double width = 0.0;
  double length = 0.0;
  bool operator==(const Dims3D&) const = default;
};

struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Point3D&) const = default;
};

inline constexpr std::string_view kDontCare = "DontCare";

/// One object annotation (or prediction, when `score` is set).
struct ObjectLabel {
  std::string class_name;
  double truncation = 0.0;
  int occlusion = 0;
  double alpha = 0.0;
  Rect2D box2d;
  Dims3D dims3d;
  Point3D location3d;
  double rotation_y = 0.0;
  std::optional<double> score;

  bool is_dont_care() const noexcept { return class_name == kDontCare; }

  bool operator==(const ObjectLabel&) const = default;
};

struct Sample {
  std::string id;
  PixelImage image;
  std::vector<ObjectLabel> labels;

  bool operator==(const Sample&) const = default;
};

/// Round half away from zero, then clamp to the 8-bit channel range.
inline std::uint8_t to_channel(double v) noexcept {
  const double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

inline std::uint8_t clamp_channel(long v) noexcept {
  return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

}  // namespace boxaug
