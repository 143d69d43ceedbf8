// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boxaug/error.hpp"
#include "boxaug/geometry.hpp"
#include "boxaug/mask.hpp"
#include "boxaug/random.hpp"
#include "boxaug/types.hpp"

namespace boxaug {

// Fixed constants of the augmentation family.
inline constexpr double kMixWeight = 0.5;
inline constexpr double kDefaultIouThreshold = 0.4;
inline constexpr double kDefaultRetention = 0.4;
inline constexpr std::uint8_t kGreyFill = 127;
inline constexpr double kGaussianFillMean = 127.0;
inline constexpr double kGaussianFillStd = 32.0;

enum class FillMode { kZeros, kGrey, kGaussian };

enum class OpKind { kCutout, kPhotometric, kBoxMixup, kBoxCutPaste, kMosaicTile };

inline constexpr std::array<OpKind, 5> kAllOps = {OpKind::kCutout, OpKind::kPhotometric,
                                                  OpKind::kBoxMixup, OpKind::kBoxCutPaste,
                                                  OpKind::kMosaicTile};

constexpr std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::kCutout: return "cutout";
    case OpKind::kPhotometric: return "photometric";
    case OpKind::kBoxMixup: return "box-mixup";
    case OpKind::kBoxCutPaste: return "box-cut-paste";
    case OpKind::kMosaicTile: return "mosaic-tile";
  }
  return "";
}

inline OpKind parse_op(std::string_view name) {
  for (const auto op : kAllOps) {
    if (op_name(op) == name) return op;
  }
  throw Error(ErrorCode::kUnknownOp, "unknown op '" + std::string(name) + "'");
}

/// Number of partner samples an op consumes besides the reference.
constexpr std::size_t partner_count(OpKind op) {
  switch (op) {
    case OpKind::kBoxMixup:
    case OpKind::kBoxCutPaste: return 1;
    case OpKind::kMosaicTile: return 3;
    default: return 0;
  }
}

struct CutoutConfig {
  int holes = 2;
  int side = 50;
  FillMode fill = FillMode::kZeros;
};

struct PhotometricConfig {
  int blur_len = 7;
  double blur_prob = 0.5;
  int rgb_shift_max = 20;
  double rgb_shift_prob = 0.5;
  double contrast_max = 0.2;
  double contrast_prob = 0.5;
};

struct IouCheckConfig {
  bool iou_check = true;
  double iou_threshold = kDefaultIouThreshold;

  /// Threshold to hand to filter_partner_boxes; +inf accepts everything.
  double effective_threshold() const noexcept {
    return iou_check ? iou_threshold : std::numeric_limits<double>::infinity();
  }
};

struct MosaicConfig {
  double retention = kDefaultRetention;
};

struct AugmentConfig {
  CutoutConfig cutout;
  PhotometricConfig photometric;
  IouCheckConfig mixup;
  IouCheckConfig cutpaste;
  MosaicConfig mosaic;
};

inline void validate(const AugmentConfig& cfg) {
  auto fraction = [](double v, std::string_view what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kConfigInvalid, std::string(what) + " must be in [0,1]");
    }
  };
  if (cfg.cutout.holes < 0) throw Error(ErrorCode::kConfigInvalid, "cutout.holes must be >= 0");
  if (cfg.cutout.side < 1) throw Error(ErrorCode::kConfigInvalid, "cutout.side must be >= 1");
  if (cfg.photometric.blur_len < 1) throw Error(ErrorCode::kConfigInvalid, "photometric.blur_len must be >= 1");
  if (cfg.photometric.rgb_shift_max < 0 || cfg.photometric.rgb_shift_max > 255) {
    throw Error(ErrorCode::kConfigInvalid, "photometric.rgb_shift_max must be in [0,255]");
  }
  fraction(cfg.photometric.blur_prob, "photometric.blur_prob");
  fraction(cfg.photometric.rgb_shift_prob, "photometric.rgb_shift_prob");
  fraction(cfg.photometric.contrast_prob, "photometric.contrast_prob");
  fraction(cfg.photometric.contrast_max, "photometric.contrast_max");
  fraction(cfg.mixup.iou_threshold, "mixup.iou_threshold");
  fraction(cfg.cutpaste.iou_threshold, "cutpaste.iou_threshold");
  fraction(cfg.mosaic.retention, "mosaic.retention");
}

struct Provenance {
  std::string op;
  std::vector<std::string> partners;
  std::uint64_t draw_digest = 0;
};

/// Box bookkeeping for one op application.
struct AugmentStats {
  std::size_t kept = 0;      // incoming boxes accepted
  std::size_t rejected = 0;  // incoming boxes rejected by the IoU check
  std::size_t dropped = 0;   // boxes dropped by conforming or mosaic retention
};

struct AugmentedSample {
  Sample sample;
  std::vector<Provenance> provenance;
  std::vector<Rect2D> regions;  // cutout holes, for previews
  AugmentStats stats;
};

namespace detail {

inline Provenance make_provenance(OpKind op, std::vector<std::string> partners, const RandomSource& rng) {
  return {std::string(op_name(op)), std::move(partners), rng.digest()};
}

inline std::vector<ObjectLabel> without_dont_care(std::span<const ObjectLabel> labels) {
  std::vector<ObjectLabel> out;
  for (const auto& l : labels) {
    if (!l.is_dont_care()) out.push_back(l);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Partner conformance

struct ConformResult {
  Sample sample;
  std::size_t dropped = 0;
};

/// Crops and/or zero-pads `s` at the bottom-right to width x height. Boxes are
/// clipped to the new frame and dropped when less than `retention` of their
/// area survives. DontCare labels are removed.
inline ConformResult conform(const Sample& s, std::size_t width, std::size_t height,
                             double retention = kDefaultRetention) {
  ConformResult out;
  out.sample.id = s.id;
  if (s.image.width() == width && s.image.height() == height) {
    out.sample.image = s.image;
  } else {
    out.sample.image = PixelImage(width, height);
    const std::size_t cw = std::min(width, s.image.width());
    const std::size_t ch = std::min(height, s.image.height());
    for (std::size_t y = 0; y < ch; ++y) {
      const auto src = s.image.data().subspan(s.image.offset(0, y), cw * PixelImage::kChannels);
      std::copy(src.begin(), src.end(), out.sample.image.data().begin() +
                                            static_cast<std::ptrdiff_t>(out.sample.image.offset(0, y)));
    }
  }
  const Rect2D frame{0.0, 0.0, static_cast<double>(width), static_cast<double>(height)};
  for (const auto& l : s.labels) {
    if (l.is_dont_care()) continue;
    const double area = l.box2d.area();
    const Rect2D clipped = intersect(l.box2d, frame);
    if (area <= 0.0 || clipped.area() / area < retention) {
      ++out.dropped;
      continue;
    }
    ObjectLabel kept = l;
    kept.box2d = clipped;
    out.sample.labels.push_back(std::move(kept));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cutout

/// Places a square of `side` pixels around (cx, cy), shifted to stay inside
/// the image where it fits and clipped where it does not.
inline Rect2D cutout_hole(std::int64_t cx, std::int64_t cy, int side, std::size_t width, std::size_t height) {
  auto place = [side](std::int64_t c, std::size_t extent) {
    const auto ext = static_cast<std::int64_t>(extent);
    const std::int64_t lo = std::clamp<std::int64_t>(c - side / 2, 0, std::max<std::int64_t>(ext - side, 0));
    const std::int64_t hi = std::min<std::int64_t>(lo + side, ext);
    return std::pair{lo, hi};
  };
  const auto [x0, x1] = place(cx, width);
  const auto [y0, y1] = place(cy, height);
  return {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1), static_cast<double>(y1)};
}

inline AugmentedSample cutout(const Sample& s, const AugmentConfig& cfg, RandomSource& rng) {
  AugmentedSample out{s, {}, {}, {}};
  PixelImage& img = out.sample.image;
  const auto& c = cfg.cutout;
  for (int h = 0; h < c.holes; ++h) {
    const auto cx = rng.uniform_int(0, static_cast<std::int64_t>(img.width()) - 1);
    const auto cy = rng.uniform_int(0, static_cast<std::int64_t>(img.height()) - 1);
    const Rect2D hole = cutout_hole(cx, cy, c.side, img.width(), img.height());
    out.regions.push_back(hole);
    for (auto y = static_cast<std::size_t>(hole.top); y < static_cast<std::size_t>(hole.bottom); ++y) {
      for (auto x = static_cast<std::size_t>(hole.left); x < static_cast<std::size_t>(hole.right); ++x) {
        for (std::size_t ch = 0; ch < PixelImage::kChannels; ++ch) {
          switch (c.fill) {
            case FillMode::kZeros: img.at(x, y, ch) = 0; break;
            case FillMode::kGrey: img.at(x, y, ch) = kGreyFill; break;
            case FillMode::kGaussian:
              img.at(x, y, ch) = to_channel(rng.normal(kGaussianFillMean, kGaussianFillStd));
              break;
          }
        }
      }
    }
  }
  out.provenance.push_back(detail::make_provenance(OpKind::kCutout, {}, rng));
  return out;
}

// ---------------------------------------------------------------------------
// Photometric

/// Step direction for the four blur angles 0, 45, 90, 135 degrees (image y down).
inline constexpr std::array<std::array<int, 2>, 4> kBlurSteps{{{1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

/// Normalised 1-D box filter of `length` taps along `angle_index`, with
/// clamped borders. Integer arithmetic, rounding half up.
inline PixelImage motion_blur(const PixelImage& in, int length, int angle_index) {
  if (length <= 1) return in;
  const auto [dx, dy] = kBlurSteps[static_cast<std::size_t>(angle_index & 3)];
  const int first = -((length - 1) / 2);
  const auto w = static_cast<std::int64_t>(in.width());
  const auto h = static_cast<std::int64_t>(in.height());
  PixelImage out(in.width(), in.height());
  const auto denom = 2 * static_cast<std::int64_t>(length);
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      std::array<std::int64_t, 3> sum{};
      for (int t = first; t < first + length; ++t) {
        const auto sx = static_cast<std::size_t>(std::clamp<std::int64_t>(x + t * dx, 0, w - 1));
        const auto sy = static_cast<std::size_t>(std::clamp<std::int64_t>(y + t * dy, 0, h - 1));
        for (std::size_t c = 0; c < 3; ++c) sum[c] += in.at(sx, sy, c);
      }
      for (std::size_t c = 0; c < 3; ++c) {
        out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y), c) =
            static_cast<std::uint8_t>((2 * sum[c] + length) / denom);
      }
    }
  }
  return out;
}

inline void rgb_shift(PixelImage& img, const std::array<int, 3>& offsets) {
  auto px = img.data();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = clamp_channel(static_cast<long>(px[i]) + offsets[i % 3]);
  }
}

/// out = round(mean + alpha (in - mean)), with the mean taken per channel
/// over the whole image.
inline void adjust_contrast(PixelImage& img, double alpha) {
  auto px = img.data();
  std::array<double, 3> mean{};
  {
    std::array<std::uint64_t, 3> sum{};
    for (std::size_t i = 0; i < px.size(); ++i) sum[i % 3] += px[i];
    const double n = static_cast<double>(img.width() * img.height());
    for (std::size_t c = 0; c < 3; ++c) mean[c] = static_cast<double>(sum[c]) / n;
  }
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double m = mean[i % 3];
    px[i] = to_channel(m + alpha * (static_cast<double>(px[i]) - m));
  }
}

/// Blur, then RGB shift, then contrast; each gated by its own probability.
inline AugmentedSample photometric(const Sample& s, const AugmentConfig& cfg, RandomSource& rng) {
  AugmentedSample out{s, {}, {}, {}};
  const auto& p = cfg.photometric;
  if (rng.bernoulli(p.blur_prob)) {
    const auto angle = static_cast<int>(rng.uniform_int(0, 3));
    out.sample.image = motion_blur(out.sample.image, p.blur_len, angle);
  }
  if (rng.bernoulli(p.rgb_shift_prob)) {
    std::array<int, 3> offsets{};
    for (auto& o : offsets) o = static_cast<int>(rng.uniform_int(-p.rgb_shift_max, p.rgb_shift_max));
    rgb_shift(out.sample.image, offsets);
  }
  if (rng.bernoulli(p.contrast_prob)) {
    adjust_contrast(out.sample.image, rng.uniform_real(1.0 - p.contrast_max, 1.0 + p.contrast_max));
  }
  out.provenance.push_back(detail::make_provenance(OpKind::kPhotometric, {}, rng));
  return out;
}

// ---------------------------------------------------------------------------
// Box-MixUp / Box-Cut-Paste

/// Keeps the incoming labels whose best 2D IoU against every reference box is
/// strictly below `iou_threshold`. DontCare labels take no part on either side.
inline std::vector<ObjectLabel> filter_partner_boxes(std::span<const ObjectLabel> ref,
                                                     std::span<const ObjectLabel> incoming,
                                                     double iou_threshold) {
  std::vector<ObjectLabel> kept;
  for (const auto& b : incoming) {
    if (b.is_dont_care()) continue;
    double best = 0.0;
    for (const auto& a : ref) {
      if (!a.is_dont_care()) best = std::max(best, iou_2d(a.box2d, b.box2d));
    }
    if (best < iou_threshold) kept.push_back(b);
  }
  return kept;
}

namespace detail {

enum class Blend { kMix, kPaste };

inline AugmentedSample blend_boxes(const Sample& a, const Sample& b, const IouCheckConfig& check,
                                   Blend mode, OpKind op, RandomSource& rng) {
  const auto conformed = conform(b, a.image.width(), a.image.height());
  const auto& partner = conformed.sample;
  auto kept = filter_partner_boxes(a.labels, partner.labels, check.effective_threshold());

  AugmentedSample out{a, {}, {}, {}};
  out.stats.kept = kept.size();
  out.stats.rejected = partner.labels.size() - kept.size();
  out.stats.dropped = conformed.dropped;

  const BoxMask mask = build_box_mask(kept, a.image.width(), a.image.height());
  auto dst = out.sample.image.data();
  const auto src = partner.image.data();
  const auto bits = mask.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (!bits[p]) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t i = p * 3 + c;
      // (x_a + x_b) / 2 rounded half away from zero.
      dst[i] = mode == Blend::kMix ? static_cast<std::uint8_t>((dst[i] + src[i] + 1) / 2) : src[i];
    }
  }
  out.sample.labels.insert(out.sample.labels.end(), kept.begin(), kept.end());
  out.provenance.push_back(make_provenance(op, {b.id}, rng));
  return out;
}

}  // namespace detail

/// x = 0.5 x_a + 0.5 x_b under the mask of the accepted partner boxes,
/// x_a elsewhere; labels are y_a followed by the accepted partner boxes.
inline AugmentedSample box_mixup(const Sample& a, const Sample& b, const AugmentConfig& cfg,
                                 RandomSource& rng) {
  return detail::blend_boxes(a, b, cfg.mixup, detail::Blend::kMix, OpKind::kBoxMixup, rng);
}

/// x = x_b under the mask of the accepted partner boxes, x_a elsewhere.
inline AugmentedSample box_cut_paste(const Sample& a, const Sample& b, const AugmentConfig& cfg,
                                     RandomSource& rng) {
  return detail::blend_boxes(a, b, cfg.cutpaste, detail::Blend::kPaste, OpKind::kBoxCutPaste, rng);
}

// ---------------------------------------------------------------------------
// Mosaic-Tile

enum Quadrant : std::size_t { kTopLeft = 0, kTopRight = 1, kBottomLeft = 2, kBottomRight = 3 };

/// Tile k of a width x height image split at (width/2, height/2).
inline Rect2D mosaic_tile_rect(std::size_t k, std::size_t width, std::size_t height) {
  const double sx = static_cast<double>(width / 2);
  const double sy = static_cast<double>(height / 2);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  switch (k) {
    case kTopLeft: return {0.0, 0.0, sx, sy};
    case kTopRight: return {sx, 0.0, w, sy};
    case kBottomLeft: return {0.0, sy, sx, h};
    default: return {sx, sy, w, h};
  }
}

/// Fraction of the box's own area lying inside `tile`; 0 for degenerate boxes.
inline double tile_overlap_fraction(const Rect2D& box, const Rect2D& tile) noexcept {
  const double area = box.area();
  return area > 0.0 ? intersect(box, tile).area() / area : 0.0;
}

/// Quadrant k of the output comes from quads[k]. A label of quads[k] is kept,
/// clipped to tile k, when at least `retention` of its area lies in tile k.
inline AugmentedSample mosaic_tile(std::span<const Sample, 4> quads, const AugmentConfig& cfg) {
  const std::size_t width = quads[0].image.width();
  const std::size_t height = quads[0].image.height();
  if (width == 0 || height == 0) throw Error(ErrorCode::kDimensionMismatch, "empty reference image");

  std::array<ConformResult, 4> conformed;
  for (std::size_t k = 0; k < 4; ++k) {
    conformed[k] = conform(quads[k], width, height);
    if (conformed[k].sample.image.width() != width || conformed[k].sample.image.height() != height) {
      throw Error(ErrorCode::kDimensionMismatch, "cannot conform sample " + quads[k].id);
    }
  }

  AugmentedSample out;
  out.sample.id = quads[0].id;
  out.sample.image = PixelImage(width, height);
  const std::size_t sx = width / 2;
  const std::size_t sy = height / 2;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t k = (x >= sx ? 1 : 0) + (y >= sy ? 2 : 0);
      const auto& src = conformed[k].sample.image;
      for (std::size_t c = 0; c < 3; ++c) out.sample.image.at(x, y, c) = src.at(x, y, c);
    }
  }

  std::vector<std::string> partners;
  for (std::size_t k = 0; k < 4; ++k) {
    out.stats.dropped += conformed[k].dropped;
    if (k > 0) partners.push_back(quads[k].id);
    const Rect2D tile = mosaic_tile_rect(k, width, height);
    for (const auto& label : conformed[k].sample.labels) {
      if (tile_overlap_fraction(label.box2d, tile) >= cfg.mosaic.retention &&
          intersect(label.box2d, tile).area() > 0.0) {
        ObjectLabel kept = label;
        kept.box2d = intersect(label.box2d, tile);
        out.sample.labels.push_back(std::move(kept));
        ++out.stats.kept;
      } else {
        ++out.stats.dropped;
      }
    }
  }
  out.provenance.push_back({std::string(op_name(OpKind::kMosaicTile)), std::move(partners), 0});
  return out;
}

}  // namespace boxaug
