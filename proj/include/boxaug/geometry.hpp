// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <tuple>
#include <utility>

#include "boxaug/types.hpp"

namespace boxaug {

/// Intersection-over-union of two axis-aligned rectangles; 0 for an empty union.
inline double iou_2d(const Rect2D& a, const Rect2D& b) noexcept {
  const double inter = intersect(a, b).area();
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Bird's-eye-view footprint in the camera x-z plane.
struct RotatedRect {
  double center_x = 0.0;
  double center_z = 0.0;
  double length = 0.0;
  double width = 0.0;
  double angle = 0.0;

  double area() const noexcept { return length * width; }
  bool operator==(const RotatedRect&) const = default;
};

/// KITTI 3D box: BEV footprint plus a vertical extent [y_bottom - height, y_bottom]
/// (camera y points down; the location is the bottom-face centre).
struct Box3D {
  RotatedRect bev;
  double y_bottom = 0.0;
  double height = 0.0;

  double volume() const noexcept { return bev.area() * height; }
  bool operator==(const Box3D&) const = default;
};

inline RotatedRect to_bev(const ObjectLabel& label) noexcept {
  return {label.location3d.x, label.location3d.z, label.dims3d.length, label.dims3d.width,
          label.rotation_y};
}

inline Box3D to_box3d(const ObjectLabel& label) noexcept {
  return {to_bev(label), label.location3d.y, label.dims3d.height};
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Fixed-capacity convex polygon. Clipping a convex n-gon by k half-planes
/// yields at most n + k vertices, so 16 covers quad-by-quad clipping.
struct ConvexPolygon {
  static constexpr std::size_t kCapacity = 16;
  std::array<Vec2, kCapacity> v{};
  std::size_t n = 0;

  void push(const Vec2& p) noexcept {
    if (n < kCapacity) v[n++] = p;
  }

  std::span<const Vec2> points() const noexcept { return {v.data(), n}; }
};

/// Shoelace formula; positive for counter-clockwise order.
inline double signed_area(std::span<const Vec2> pts) noexcept {
  if (pts.size() < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    acc += p.x * q.y - q.x * p.y;
  }
  return 0.5 * acc;
}

/// Corners in counter-clockwise order. Rotation follows the KITTI devkit:
/// x' = cos(ry) lx + sin(ry) lz, z' = -sin(ry) lx + cos(ry) lz.
inline ConvexPolygon corners(const RotatedRect& r) noexcept {
  const double c = std::cos(r.angle);
  const double s = std::sin(r.angle);
  const double hl = 0.5 * r.length;
  const double hw = 0.5 * r.width;
  constexpr std::array<std::array<double, 2>, 4> signs{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  ConvexPolygon poly;
  for (const auto& sg : signs) {
    const double lx = sg[0] * hl;
    const double lz = sg[1] * hw;
    poly.push({r.center_x + c * lx + s * lz, r.center_z - s * lx + c * lz});
  }
  if (signed_area(poly.points()) < 0.0) {
    std::swap(poly.v[1], poly.v[3]);
  }
  return poly;
}

/// Sutherland-Hodgman: clips `subject` against every edge of the convex,
/// counter-clockwise `clip` polygon.
inline ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) noexcept {
  ConvexPolygon out = subject;
  for (std::size_t e = 0; e < clip.n && out.n > 0; ++e) {
    const Vec2 a = clip.v[e];
    const Vec2 b = clip.v[(e + 1) % clip.n];
    const ConvexPolygon in = out;
    out.n = 0;
    for (std::size_t i = 0; i < in.n; ++i) {
      const Vec2 p = in.v[i];
      const Vec2 q = in.v[(i + 1) % in.n];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      if (dp >= 0.0) out.push(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        out.push({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
  }
  return out;
}

/// Slivers below this area (m^2) are treated as empty intersections.
inline constexpr double kSliverArea = 1e-12;

namespace detail {

inline auto as_tuple(const RotatedRect& r) noexcept {
  return std::tie(r.center_x, r.center_z, r.length, r.width, r.angle);
}

/// Intersection area computed on a canonical argument order so that
/// swapping arguments gives bit-identical results.
inline double bev_intersection_area(const RotatedRect& a, const RotatedRect& b) noexcept {
  if (a.area() <= 0.0 || b.area() <= 0.0) return 0.0;
  const bool swap = as_tuple(b) < as_tuple(a);
  const RotatedRect& first = swap ? b : a;
  const RotatedRect& second = swap ? a : b;
  const double area = std::abs(signed_area(clip_convex(corners(first), corners(second)).points()));
  return area < kSliverArea ? 0.0 : area;
}

}  // namespace detail

inline double intersection_area(const RotatedRect& a, const RotatedRect& b) noexcept {
  return detail::bev_intersection_area(a, b);
}

inline double iou_bev(const RotatedRect& a, const RotatedRect& b) noexcept {
  const double inter = detail::bev_intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

inline double iou_3d(const Box3D& a, const Box3D& b) noexcept {
  const double top = std::max(a.y_bottom - a.height, b.y_bottom - b.height);
  const double bottom = std::min(a.y_bottom, b.y_bottom);
  const double overlap_h = std::max(0.0, bottom - top);
  const double inter = overlap_h > 0.0 ? detail::bev_intersection_area(a.bev, b.bev) * overlap_h : 0.0;
  const double uni = a.volume() + b.volume() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace boxaug
