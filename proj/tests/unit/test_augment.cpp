// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <random>

#include "boxaug/augment.hpp"
#include "oracles/fixtures.hpp"
#include "oracles/naive.hpp"

namespace boxaug {
namespace {

using testing::make_label;

Sample constant_sample(std::size_t w, std::size_t h, std::uint8_t v, std::vector<ObjectLabel> labels = {}) {
  return {"000000", PixelImage(w, h, v), std::move(labels)};
}

AugmentConfig quiet_photometric() {
  AugmentConfig cfg;
  cfg.photometric.blur_prob = 0.0;
  cfg.photometric.rgb_shift_prob = 0.0;
  cfg.photometric.contrast_prob = 0.0;
  return cfg;
}

TEST(Ops, NamesRoundTrip) {
  for (const auto op : kAllOps) EXPECT_EQ(parse_op(op_name(op)), op);
  try {
    parse_op("rotate");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownOp);
  }
}

TEST(Config, ValidateRejectsOutOfRange) {
  AugmentConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.mixup.iou_threshold = 1.5;
  EXPECT_THROW(validate(cfg), Error);
  cfg = {};
  cfg.cutout.side = 0;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(Cutout, ZeroHolesIsIdentity) {
  std::mt19937_64 gen(1);
  const auto s = testing::random_sample(gen, 20, 20, 3);
  AugmentConfig cfg;
  cfg.cutout.holes = 0;
  auto rng = derive_stream(1, {});
  const auto out = cutout(s, cfg, rng);
  EXPECT_EQ(out.sample, s);
  EXPECT_TRUE(out.regions.empty());
}

TEST(Cutout, FullCoverZeroesEverything) {
  const auto s = constant_sample(30, 20, 200, {make_label("Car", {1, 1, 5, 5})});
  AugmentConfig cfg;
  cfg.cutout.holes = 1;
  cfg.cutout.side = 30;
  auto rng = derive_stream(2, {});
  const auto out = cutout(s, cfg, rng);
  for (const auto v : out.sample.image.data()) ASSERT_EQ(v, 0);
  EXPECT_EQ(out.sample.labels, s.labels);
}

TEST(Cutout, SeededHoleOnSmallImage) {
  const auto s = constant_sample(4, 4, 200);
  AugmentConfig cfg;
  cfg.cutout.holes = 1;
  cfg.cutout.side = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = derive_stream(seed, {3});
    const auto out = cutout(s, cfg, rng);
    // Replay the two centre draws and place the hole by hand.
    auto replay = derive_stream(seed, {3});
    const auto cx = replay.uniform_int(0, 3);
    const auto cy = replay.uniform_int(0, 3);
    const auto x0 = std::clamp<std::int64_t>(cx - 1, 0, 2);
    const auto y0 = std::clamp<std::int64_t>(cy - 1, 0, 2);
    std::size_t zeroed = 0;
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t x = 0; x < 4; ++x) {
        const bool in = static_cast<std::int64_t>(x) >= x0 && static_cast<std::int64_t>(x) < x0 + 2 &&
                        static_cast<std::int64_t>(y) >= y0 && static_cast<std::int64_t>(y) < y0 + 2;
        ASSERT_EQ(out.sample.image.at(x, y, 0), in ? 0 : 200);
        zeroed += out.sample.image.at(x, y, 0) == 0 ? 1 : 0;
      }
    }
    EXPECT_EQ(zeroed, 4u);
    ASSERT_EQ(out.regions.size(), 1u);
  }
}

TEST(Cutout, OversizedHoleIsClipped) {
  EXPECT_EQ(cutout_hole(2, 2, 10, 4, 6), (Rect2D{0, 0, 4, 6}));
  EXPECT_EQ(cutout_hole(0, 0, 2, 10, 10), (Rect2D{0, 0, 2, 2}));
  EXPECT_EQ(cutout_hole(9, 9, 2, 10, 10), (Rect2D{8, 8, 10, 10}));
}

TEST(Cutout, GreyAndGaussianFill) {
  const auto s = constant_sample(8, 8, 0);
  AugmentConfig cfg;
  cfg.cutout.holes = 1;
  cfg.cutout.side = 8;
  cfg.cutout.fill = FillMode::kGrey;
  auto rng = derive_stream(4, {});
  const auto grey = cutout(s, cfg, rng);
  for (const auto v : grey.sample.image.data()) ASSERT_EQ(v, kGreyFill);
  cfg.cutout.fill = FillMode::kGaussian;
  auto a = derive_stream(4, {});
  auto b = derive_stream(4, {});
  const auto ga = cutout(s, cfg, a);
  EXPECT_EQ(ga.sample.image, cutout(s, cfg, b).sample.image);
  std::set<int> distinct(ga.sample.image.data().begin(), ga.sample.image.data().end());
  EXPECT_GT(distinct.size(), 10u);
}

TEST(Photometric, AllProbabilitiesZeroIsIdentity) {
  std::mt19937_64 gen(5);
  const auto s = testing::random_sample(gen, 20, 20, 3);
  auto rng = derive_stream(5, {});
  EXPECT_EQ(photometric(s, quiet_photometric(), rng).sample, s);
}

TEST(Photometric, ShiftOfConstantImage) {
  PixelImage img(5, 4, 100);
  rgb_shift(img, {10, -10, 0});
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 5; ++x) {
      ASSERT_EQ(img.at(x, y, 0), 110);
      ASSERT_EQ(img.at(x, y, 1), 90);
      ASSERT_EQ(img.at(x, y, 2), 100);
    }
  }
  PixelImage edge(1, 1, 250);
  rgb_shift(edge, {20, -255, 0});
  EXPECT_EQ(edge.at(0, 0, 0), 255);
  EXPECT_EQ(edge.at(0, 0, 1), 0);
}

TEST(Photometric, UnitContrastIsIdentity) {
  std::mt19937_64 gen(6);
  const auto img = testing::random_image(gen, 13, 7);
  auto copy = img;
  adjust_contrast(copy, 1.0);
  EXPECT_EQ(copy, img);
}

TEST(Photometric, ContrastAroundMean) {
  PixelImage img(2, 1);
  img.at(0, 0, 0) = 100;
  img.at(1, 0, 0) = 200;
  adjust_contrast(img, 0.5);
  EXPECT_EQ(img.at(0, 0, 0), 125);
  EXPECT_EQ(img.at(1, 0, 0), 175);
}

TEST(Photometric, BlurKeepsConstantsAndAverages) {
  const PixelImage flat(9, 9, 77);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(motion_blur(flat, 7, a), flat);
  PixelImage line(3, 1);
  line.at(1, 0, 0) = 90;
  const auto out = motion_blur(line, 3, 0);
  EXPECT_EQ(out.at(1, 0, 0), 30);
  EXPECT_EQ(out.at(0, 0, 0), 30);  // clamped border repeats the left pixel
  EXPECT_EQ(motion_blur(line, 1, 0), line);
}

TEST(Photometric, LabelsUnchangedAndSeeded) {
  std::mt19937_64 gen(7);
  const auto s = testing::random_sample(gen, 20, 20, 3);
  AugmentConfig cfg;
  cfg.photometric.blur_prob = cfg.photometric.rgb_shift_prob = cfg.photometric.contrast_prob = 1.0;
  auto a = derive_stream(8, {});
  auto b = derive_stream(8, {});
  const auto oa = photometric(s, cfg, a);
  EXPECT_EQ(oa.sample.labels, s.labels);
  EXPECT_EQ(oa.sample, photometric(s, cfg, b).sample);
  EXPECT_EQ(oa.provenance.at(0).draw_digest, a.digest());
}

TEST(IouCheck, Examples) {
  const std::vector<ObjectLabel> ref = {make_label("Car", {0, 0, 2, 2})};
  const std::vector<ObjectLabel> same = {make_label("Car", {0, 0, 2, 2})};
  const std::vector<ObjectLabel> far = {make_label("Car", {10, 10, 12, 12})};
  const std::vector<ObjectLabel> partial = {make_label("Car", {1, 1, 3, 3})};
  EXPECT_TRUE(filter_partner_boxes(ref, same, 0.4).empty());
  EXPECT_EQ(filter_partner_boxes(ref, far, 0.4).size(), 1u);
  EXPECT_EQ(filter_partner_boxes(ref, partial, 0.4).size(), 1u);
  EXPECT_TRUE(filter_partner_boxes(ref, partial, 1.0 / 7.0).empty());
}

TEST(IouCheck, DisabledAcceptsEverything) {
  IouCheckConfig off{false, 0.4};
  const std::vector<ObjectLabel> ref = {make_label("Car", {0, 0, 2, 2})};
  EXPECT_EQ(filter_partner_boxes(ref, ref, off.effective_threshold()).size(), 1u);
}

TEST(IouCheck, MatchesDirectComparison) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_sample(gen, 32, 32, 5);
    const auto b = testing::random_sample(gen, 32, 32, 5);
    ASSERT_EQ(filter_partner_boxes(a.labels, b.labels, 0.4), oracle::naive_filter(a.labels, b.labels, 0.4));
  }
}

TEST(BoxMixup, EqualImagesOnlyGainLabels) {
  const std::vector<ObjectLabel> labels = {make_label("Car", {1, 1, 5, 5}), make_label("Pedestrian", {6, 2, 9, 9})};
  const auto a = constant_sample(12, 10, 90, labels);
  auto b = a;
  b.id = "000001";
  AugmentConfig cfg;
  cfg.mixup.iou_check = false;
  auto rng = derive_stream(0, {});
  const auto off = box_mixup(a, b, cfg, rng);
  EXPECT_EQ(off.sample.image, a.image);
  EXPECT_EQ(off.sample.labels.size(), 4u);
  cfg.mixup.iou_check = true;
  const auto on = box_mixup(a, b, cfg, rng);
  EXPECT_EQ(on.sample.labels, a.labels);
  EXPECT_EQ(on.stats.rejected, 2u);
  EXPECT_EQ(on.provenance.at(0).partners, (std::vector<std::string>{"000001"}));
}

TEST(BoxMixup, PartnerWithoutLabels) {
  std::mt19937_64 gen(10);
  const auto a = testing::random_sample(gen, 20, 20, 3);
  Sample b{"b", testing::random_image(gen, 20, 20), {}};
  auto rng = derive_stream(0, {});
  const AugmentConfig cfg;
  EXPECT_EQ(box_mixup(a, b, cfg, rng).sample, a);
  EXPECT_EQ(box_cut_paste(a, b, cfg, rng).sample, a);
}

TEST(BoxMixup, AveragesUnderMask) {
  const auto a = constant_sample(6, 6, 100);
  const auto b = constant_sample(6, 6, 200, {make_label("Car", {1, 1, 3, 3})});
  auto rng = derive_stream(0, {});
  const AugmentConfig cfg;
  const auto mix = box_mixup(a, b, cfg, rng);
  EXPECT_EQ(mix.sample.image.at(1, 1, 0), 150);
  EXPECT_EQ(mix.sample.image.at(2, 2, 2), 150);
  EXPECT_EQ(mix.sample.image.at(3, 3, 0), 100);
  EXPECT_EQ(mix.sample.labels.size(), 1u);
  const auto paste = box_cut_paste(a, b, cfg, rng);
  EXPECT_EQ(paste.sample.image.at(1, 1, 0), 200);
  EXPECT_EQ(paste.sample.image.at(0, 0, 0), 100);
}

TEST(BoxMixup, HalfRoundsAwayFromZero) {
  const auto a = constant_sample(2, 2, 100);
  const auto b = constant_sample(2, 2, 101, {make_label("Car", {0, 0, 2, 2})});
  auto rng = derive_stream(0, {});
  EXPECT_EQ(box_mixup(a, b, AugmentConfig{}, rng).sample.image.at(0, 0, 0), 101);
}

TEST(BoxBlend, MatchesPerPixelReference) {
  std::mt19937_64 gen(12);
  const AugmentConfig cfg;
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_sample(gen, 32, 32, 4);
    const auto b = testing::random_sample(gen, 32, 32, 4, "000001");
    auto rng = derive_stream(0, {});
    const auto mix = box_mixup(a, b, cfg, rng);
    const auto ref_mix = oracle::naive_blend(a, b, 0.4, false);
    ASSERT_EQ(mix.sample, ref_mix.sample) << i;
    ASSERT_EQ(mix.stats.kept, ref_mix.kept);
    const auto paste = box_cut_paste(a, b, cfg, rng);
    ASSERT_EQ(paste.sample, oracle::naive_blend(a, b, 0.4, true).sample) << i;
  }
}

TEST(BoxBlend, IncomingThreeDFieldsPreserved) {
  std::mt19937_64 gen(13);
  AugmentConfig cfg;
  cfg.cutpaste.iou_check = false;
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_sample(gen, 32, 32, 3);
    auto b = a;
    b.id = "b";
    auto rng = derive_stream(0, {});
    const auto out = box_cut_paste(a, b, cfg, rng);
    ASSERT_EQ(out.sample.labels.size(), 2 * a.labels.size() - std::count_if(a.labels.begin(), a.labels.end(),
                                                                            [](const ObjectLabel& l) {
                                                                              return l.is_dont_care();
                                                                            }));
    for (std::size_t k = a.labels.size(); k < out.sample.labels.size(); ++k) {
      const auto& l = out.sample.labels[k];
      const auto it = std::find_if(b.labels.begin(), b.labels.end(), [&](const ObjectLabel& s) {
        return s.box2d == l.box2d && s.class_name == l.class_name;
      });
      ASSERT_NE(it, b.labels.end());
      ASSERT_EQ(l.dims3d, it->dims3d);
      ASSERT_EQ(l.location3d, it->location3d);
      ASSERT_EQ(l.rotation_y, it->rotation_y);
    }
  }
}

TEST(Conform, CropAndPad) {
  std::mt19937_64 gen(14);
  for (int i = 0; i < 200; ++i) {
    const auto b = testing::random_sample(gen, 32, 32, 5);
    const std::size_t w = 1 + gen() % 32;
    const std::size_t h = 1 + gen() % 32;
    const auto got = conform(b, w, h).sample;
    const auto want = oracle::naive_conform(b, w, h);
    ASSERT_EQ(got.image, want.image);
    ASSERT_EQ(got.labels, want.labels);
  }
}

TEST(Mosaic, IdenticalQuadsKeepImage) {
  std::mt19937_64 gen(15);
  auto s = testing::random_sample(gen, 32, 32, 0);
  s.labels = {make_label("Car", {1, 1, 4, 4})};
  const std::array<Sample, 4> quads{s, s, s, s};
  const auto out = mosaic_tile(quads, AugmentConfig{});
  EXPECT_EQ(out.sample.image, s.image);
  // (1,1)-(4,4) lies in the top-left tile only when the split is past 4.
  const bool in_tl = s.image.width() / 2 >= 4 && s.image.height() / 2 >= 4;
  if (in_tl) {
    EXPECT_EQ(out.sample.labels.size(), 1u);
  }
}

TEST(Mosaic, BoxInsideTileUnclipped) {
  Sample s = constant_sample(100, 100, 10, {make_label("Car", {10, 10, 20, 20})});
  const std::array<Sample, 4> quads{s, constant_sample(100, 100, 20), constant_sample(100, 100, 30),
                                    constant_sample(100, 100, 40)};
  const auto out = mosaic_tile(quads, AugmentConfig{});
  ASSERT_EQ(out.sample.labels.size(), 1u);
  EXPECT_EQ(out.sample.labels[0], s.labels[0]);
  EXPECT_EQ(out.sample.image.at(10, 10, 0), 10);
  EXPECT_EQ(out.sample.image.at(60, 10, 0), 20);
  EXPECT_EQ(out.sample.image.at(10, 60, 0), 30);
  EXPECT_EQ(out.sample.image.at(60, 60, 0), 40);
  EXPECT_EQ(out.provenance.at(0).partners.size(), 3u);
}

TEST(Mosaic, RetentionBoundary) {
  // Top-left tile is [0,50) x [0,50). 30% of (44,0,64,10) lies in it, 50% of (40,0,60,10).
  const auto s30 = constant_sample(100, 100, 0, {make_label("Car", {44, 0, 64, 10})});
  const auto s50 = constant_sample(100, 100, 0, {make_label("Car", {40, 0, 60, 10})});
  const auto blank = constant_sample(100, 100, 0);
  EXPECT_NEAR(tile_overlap_fraction({44, 0, 64, 10}, mosaic_tile_rect(kTopLeft, 100, 100)), 0.3, 1e-12);
  EXPECT_TRUE(mosaic_tile(std::array<Sample, 4>{s30, blank, blank, blank}, AugmentConfig{}).sample.labels.empty());
  const auto kept = mosaic_tile(std::array<Sample, 4>{s50, blank, blank, blank}, AugmentConfig{});
  ASSERT_EQ(kept.sample.labels.size(), 1u);
  EXPECT_EQ(kept.sample.labels[0].box2d, (Rect2D{40, 0, 50, 10}));
  EXPECT_EQ(kept.sample.labels[0].dims3d, s50.labels[0].dims3d);
}

TEST(Mosaic, PartnerBoxesTestedAgainstTheirOwnTile) {
  const auto blank = constant_sample(100, 100, 0);
  const auto tr = constant_sample(100, 100, 0, {make_label("Car", {60, 10, 70, 20}), make_label("Car", {10, 10, 20, 20})});
  const auto out = mosaic_tile(std::array<Sample, 4>{blank, tr, blank, blank}, AugmentConfig{});
  ASSERT_EQ(out.sample.labels.size(), 1u);
  EXPECT_EQ(out.sample.labels[0].box2d, (Rect2D{60, 10, 70, 20}));
  EXPECT_EQ(out.stats.dropped, 1u);
}

}  // namespace
}  // namespace boxaug
